//! The 5 × 5 pair showing that Robinson structure alone does not make the
//! identity optimal: `<A, B> = 8` while `(4 5 1 2 3)` reaches 4.

use crate::matrix::SymMatrix;

pub fn counterexample_a() -> SymMatrix {
    SymMatrix::from_rows(&[
        [1., 1., 1., 0., 0.],
        [1., 1., 1., 1., 0.],
        [1., 1., 1., 1., 0.],
        [0., 1., 1., 1., 0.],
        [0., 0., 0., 0., 1.],
    ])
    .expect("fixture is symmetric")
}

pub fn counterexample_b() -> SymMatrix {
    SymMatrix::from_rows(&[
        [0., 1., 1., 1., 1.],
        [1., 0., 1., 1., 1.],
        [1., 1., 0., 0., 0.],
        [1., 1., 0., 0., 0.],
        [1., 1., 0., 0., 0.],
    ])
    .expect("fixture is symmetric")
}
