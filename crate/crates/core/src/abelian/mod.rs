//! Exact integer linear algebra and abelian group models.

pub(crate) mod elimination;
pub mod fg;
pub mod matrix;
pub mod snf;
pub mod structured;

pub use fg::FgAbelianGroup;
pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, smith_normal_form_with, SmithDecomposition};
pub use structured::{validate, Cardinal, Decomposition, Parts, StructuredAbelian};

use crate::config::Budgets;
use crate::error::{Error, Result};

/// `coker(A : Z^cols → Z^rows)`.
pub fn cokernel(a: &IntegerMatrix) -> FgAbelianGroup {
    cokernel_with(a, &Budgets::default()).expect("cokernel within default budget")
}

pub fn cokernel_with(a: &IntegerMatrix, budgets: &Budgets) -> Result<FgAbelianGroup> {
    let (rank, torsion) = elimination::invariant_factors(a, budgets)?;
    Ok(FgAbelianGroup::new(a.rows() - rank, torsion))
}

/// `ker(d_out) / im(d_in)` for `Z^a --d_in--> Z^b --d_out--> Z^c`.
pub fn homology_at(d_out: &IntegerMatrix, d_in: &IntegerMatrix) -> Result<FgAbelianGroup> {
    homology_at_with(d_out, d_in, &Budgets::default())
}

pub fn homology_at_with(
    d_out: &IntegerMatrix,
    d_in: &IntegerMatrix,
    budgets: &Budgets,
) -> Result<FgAbelianGroup> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::CompositionNonzero(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero(
            "d_out · d_in has nonzero entries".into(),
        ));
    }
    let (r_out, _) = elimination::invariant_factors(d_out, budgets)?;
    let (r_in, torsion) = elimination::invariant_factors(d_in, budgets)?;
    Ok(FgAbelianGroup::new(d_in.rows() - r_out - r_in, torsion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn fg(r: usize, t: &[i64]) -> FgAbelianGroup {
        FgAbelianGroup::new(r, t.iter().map(|&x| BigInt::from(x)))
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel(&IntegerMatrix::from_rows(&[[2]])), fg(0, &[2]));
        assert_eq!(
            cokernel(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]])),
            fg(0, &[6])
        );
        assert_eq!(cokernel(&IntegerMatrix::zeros(2, 2)), fg(2, &[]));
    }

    #[test]
    fn homology() {
        let h = homology_at(
            &IntegerMatrix::zeros(1, 1),
            &IntegerMatrix::from_rows(&[[5]]),
        )
        .unwrap();
        assert_eq!(h, fg(0, &[5]));
        let h = homology_at(
            &IntegerMatrix::zeros(1, 1),
            &IntegerMatrix::from_rows(&[[2]]),
        )
        .unwrap();
        assert_eq!(h, fg(0, &[2]));
        let d_in = IntegerMatrix::from_rows(&[[2, 4], [6, 8]]);
        let h = homology_at(&IntegerMatrix::zeros(1, 2), &d_in).unwrap();
        assert_eq!(h, fg(0, &[2, 4]));
    }

    #[test]
    fn malformed_complex_is_rejected() {
        let one = IntegerMatrix::from_rows(&[[1]]);
        assert!(matches!(
            homology_at(&one, &one),
            Err(Error::CompositionNonzero(_))
        ));
        assert!(homology_at(&IntegerMatrix::zeros(1, 2), &one).is_err());
    }
}
