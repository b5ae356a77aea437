//! Exact-arithmetic engine for the topological vertex, Schur-function
//! specializations and Nekrasov–Okounkov type identities, verified as truncated
//! formal power series coefficient by coefficient.

pub mod error;
pub mod exactseries;
pub mod graphcalc;
pub mod identities;
pub mod oracle;
pub mod partitions;
pub mod symfunc;
pub mod vertex;

pub use error::{Error, Result};
pub use exactseries::{first_mismatch, Monomial, MultiSeries, ParamPoly, ParamRing, TruncationSpec, Window};
pub use partitions::{BoxCoord, Partition};
