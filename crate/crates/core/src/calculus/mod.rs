//! The difference calculi and the identities connecting them: partial
//! divided differences on block points, iterated directional quotients on
//! nested triples, fixed-direction iterated quotients, and the affine
//! transport between the first two.

mod affine;
mod checks;
mod dd;
mod dq;
mod phi;

pub use affine::{transport_map, AffineMap, TransportedQuotient};
pub use checks::{
    check_fviaphi, check_recursion, check_simpfml, check_symmetry, check_transport, permutations,
    CheckConfig,
};
pub use dd::{divided_difference, divided_difference_recursive, DividedDifferenceMap};
pub use dq::{difference_quotient, iterated_quotient};
pub use phi::ludkovsky_quotient;

use crate::domains::MultiIndex;
use crate::error::{EngineError, Result};

/// Collapses a multi-index beta on the expanded variable set of alpha back
/// to the base coordinates: entry j sums beta over the flat slots of
/// alpha-block j.
pub fn flatten_multiindex(alpha: &MultiIndex, beta: &MultiIndex) -> Result<MultiIndex> {
    if beta.dim() != alpha.flat_len() {
        return Err(EngineError::Shape(format!(
            "beta has {} entries, expanded variable set of {alpha} has {}",
            beta.dim(),
            alpha.flat_len()
        )));
    }
    let flattened = (0..alpha.dim())
        .map(|j| {
            let start = alpha.block_start(j);
            (start..start + alpha.block_len(j))
                .map(|r| beta.entry(r))
                .sum()
        })
        .collect();
    Ok(MultiIndex::new(flattened))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_examples() {
        // d = 2, alpha = (1,0), beta = (1,1,0): blocks (1,2) and (3)
        let alpha = MultiIndex::new(vec![1, 0]);
        let beta = MultiIndex::new(vec![1, 1, 0]);
        assert_eq!(
            flatten_multiindex(&alpha, &beta).unwrap(),
            MultiIndex::new(vec![2, 0])
        );
        // zero beta flattens to zero
        let z = MultiIndex::zero(3);
        assert_eq!(
            flatten_multiindex(&alpha, &z).unwrap(),
            MultiIndex::zero(2)
        );
        // d = 1, alpha = (2): the single block sums everything
        let alpha1 = MultiIndex::new(vec![2]);
        let beta1 = MultiIndex::new(vec![0, 1, 1]);
        assert_eq!(
            flatten_multiindex(&alpha1, &beta1).unwrap(),
            MultiIndex::new(vec![2])
        );
    }

    #[test]
    fn flatten_shape_error() {
        let alpha = MultiIndex::new(vec![1]);
        let beta = MultiIndex::new(vec![1]);
        assert!(matches!(
            flatten_multiindex(&alpha, &beta),
            Err(EngineError::Shape(_))
        ));
    }
}
