//! Exact arithmetic over finite fields F_q and their extensions, with the
//! multiplicative and F_q-Order machinery needed to classify elements as
//! r-primitive, k-normal, m-free, or g-free, to count and enumerate
//! k-normal polynomials, and to machine-check the structural identities
//! relating all of these over grids of small fields.
//!
//! Everything is deterministic: randomized factorization draws from a seed
//! the caller controls (0 by default), elements and polynomials have pinned
//! canonical orders, and every report is emitted in a canonical ordering.

pub mod classify;
pub mod error;
pub mod ext;
pub mod field;
pub mod linearized;
pub mod num;
pub mod poly;
pub mod text;
pub mod verify;

pub use error::{Error, Result};
pub use ext::{ExtCtx, ExtElem};
pub use field::{FieldSpec, FqCtx, FqElem};
pub use linearized::{fq_order_element, fq_order_poly, lin_eval, OrdMethod, OrdResult};
pub use poly::{Factorization, Poly};
