//! Decorated-tree calculus for twisted Whitney towers over ℤ.
//!
//! * [`forest`]: framed, rooted and ∞-trees, canonical forms, intersection forests.
//! * [`lie`]: the free Lie algebra in the Lyndon basis, `L₁⊗L_{n+1}` and the bracket kernel.
//! * [`groups`]: the presented groups `𝒯ₙ`, `𝒯ₙ^∞`, `𝒯ₙ^{k,∞}` and obstruction tests.
//! * [`eta`]: summation maps, Magnus expansions, Milnor invariants and Arf classes.
//! * [`rewrite`]: edge collapses and mono-labeling of forests.

pub mod error;
pub mod eta;
pub mod forest;
pub mod groups;
pub mod lie;
pub mod rewrite;
pub mod zmat;

pub use error::{Error, Result};

/// Big integers are written as decimal strings in machine-readable output.
pub fn serialize_ints<S: serde::Serializer>(v: &[zmat::Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
