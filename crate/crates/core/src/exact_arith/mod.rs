//! Exact arithmetic for integer multiples of square roots and for elements of
//! real quadratic fields `Q(sqrt(disc))`.

mod quadratic;
mod surd;

pub use quadratic::{eigenvalues, to_float, QuadraticReal};
pub use surd::{exact_sqrt, squarefree_split, surd_mul, Surd, SurdSum};
