//! Annihilating functionals and certified approximation lower bounds.
//!
//! A cycle witness `lambda` on a point configuration induces the functional
//! `F(f) = sum_j lambda_j f(x_j)` over its support. `F` vanishes on every sum
//! of radial functions about the fixed centroids — each term is constant on
//! every distance level, and the level sums of `lambda` are zero — so for any
//! target `f` and any such sum `h`,
//!
//! ```text
//! ||f - h||_inf >= |F(f)| / sum_j |lambda_j|
//! ```
//!
//! which certifies a floor under the uniform error of every shifted RBF
//! network with centroids in the set, for every activation.

use crate::cycles::{verify_witness, CycleError, CycleWitness};
use crate::geometry::{dist_slices, CentroidSet, GeometryError, PointConfiguration};
use crate::network::{NetworkError, ShiftedRbfModel};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DualityError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("witness does not annihilate the level system of this configuration")]
    WitnessRejected,
    #[error("value count {found} does not match support size {expected}")]
    ValueLengthMismatch { expected: usize, found: usize },
    #[error("model centroid {index} does not belong to the centroid set (within tolerance)")]
    CentroidOutsideSet { index: usize },
    #[error("model dimension {model} does not match configuration dimension {config}")]
    DimensionMismatch { model: usize, config: usize },
}

/// `F(f) = sum_j lambda_j f(x_j)` over a verified cycle support, with norm
/// `sum_j |lambda_j|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatingFunctional {
    support: Vec<usize>,
    lambda: Vec<i64>,
    norm: i64,
}

impl AnnihilatingFunctional {
    /// Builds the functional from a witness, verifying that the witness
    /// annihilates the level system of `(x, s)` at tolerance `tol`.
    pub fn from_witness(
        x: &PointConfiguration,
        s: &CentroidSet,
        witness: &CycleWitness,
        tol: f64,
    ) -> Result<Self, DualityError> {
        if !verify_witness(x, s, witness.lambda(), tol)? {
            return Err(DualityError::WitnessRejected);
        }
        let support = witness.support();
        let lambda: Vec<i64> = support.iter().map(|&j| witness.lambda()[j]).collect();
        let norm = lambda.iter().map(|&l| l.abs()).sum();
        Ok(AnnihilatingFunctional {
            support,
            lambda,
            norm,
        })
    }

    /// Support point indices into the originating configuration.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Integer weights aligned with [`support`](Self::support).
    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    /// `sum |lambda_j|`, the functional norm.
    pub fn norm(&self) -> i64 {
        self.norm
    }

    /// Applies the functional to values aligned with the support.
    pub fn apply(&self, values: &[f64]) -> Result<f64, DualityError> {
        if values.len() != self.support.len() {
            return Err(DualityError::ValueLengthMismatch {
                expected: self.support.len(),
                found: values.len(),
            });
        }
        Ok(self
            .lambda
            .iter()
            .zip(values)
            .map(|(&l, &v)| l as f64 * v)
            .sum())
    }

    /// The worst-case target on the support: `sign(lambda_j)`, which realizes
    /// `|F(f0)| = sum |lambda_j|` exactly on a finite configuration.
    pub fn worst_case_target(&self) -> Vec<f64> {
        self.lambda.iter().map(|&l| l.signum() as f64).collect()
    }

    /// The worst-case target embedded into a configuration of `n` points:
    /// `sign(lambda_j)` on the support and 0 elsewhere, staying strictly
    /// inside (-1, 1) off the support.
    pub fn worst_case_target_embedded(&self, n: usize) -> Vec<f64> {
        let mut values = vec![0.0; n];
        for (&j, &l) in self.support.iter().zip(&self.lambda) {
            values[j] = l.signum() as f64;
        }
        values
    }

    /// Certified lower bound `|F(f)| / norm` on the uniform error of ANY
    /// radial sum about the centroid set — in particular any shifted RBF
    /// network over it, for any activation.
    pub fn lower_bound(&self, target_values: &[f64]) -> Result<f64, DualityError> {
        Ok(self.apply(target_values)?.abs() / self.norm as f64)
    }
}

/// Result of numerically testing `F(H) = 0` for a model `H` over the
/// centroid set: the achieved `|F(H)|` and the magnitude-scaled tolerance it
/// must stay under.
#[derive(Debug, Clone, Copy)]
pub struct AnnihilationCheck {
    /// `|F(H)|` evaluated on the support.
    pub value: f64,
    /// `1e-9 * (1 + sum_i |w_i| * sup |g|)` over the arguments encountered.
    pub tolerance: f64,
}

impl AnnihilationCheck {
    pub fn passes(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Evaluates `|F(H)|` for a shifted RBF model whose centroids all belong to
/// `s` (within `tol`). The result must vanish up to rounding: the check
/// tolerance scales with the model magnitude so it stays meaningful for
/// large weights.
pub fn check_annihilation(
    functional: &AnnihilatingFunctional,
    x: &PointConfiguration,
    s: &CentroidSet,
    model: &ShiftedRbfModel,
    tol: f64,
) -> Result<AnnihilationCheck, DualityError> {
    if model.dim() != x.dim() {
        return Err(DualityError::DimensionMismatch {
            model: model.dim(),
            config: x.dim(),
        });
    }
    for (index, term) in model.terms().iter().enumerate() {
        let inside = s
            .centroids()
            .iter()
            .any(|c| dist_slices(term.centroid.coords(), c.coords()) <= tol);
        if !inside {
            return Err(DualityError::CentroidOutsideSet { index });
        }
    }
    let g = model.activation();
    let mut accum = 0.0;
    let mut sup_g = 0.0f64;
    for (&j, &l) in functional.support.iter().zip(&functional.lambda) {
        let point = x.get(j);
        let mut h = 0.0;
        for term in model.terms() {
            let d = dist_slices(point.coords(), term.centroid.coords());
            let gv = g.eval(d - term.shift);
            sup_g = sup_g.max(gv.abs());
            h += term.weight * gv;
        }
        accum += l as f64 * h;
    }
    let weight_mass: f64 = model.terms().iter().map(|t| t.weight.abs()).sum();
    Ok(AnnihilationCheck {
        value: accum.abs(),
        tolerance: 1e-9 * (1.0 + weight_mass * sup_g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activations::builtin;
    use crate::cycles::detect_cycle;
    use crate::geometry::{default_grouping_tolerance, Point};
    use crate::network::{RbfTerm, ShiftedRbfModel};

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn two_point_setup() -> (PointConfiguration, CentroidSet, f64, AnnihilatingFunctional) {
        let x =
            PointConfiguration::new(vec![pt(&[2.0, 1.0]), pt(&[2.0, -1.0])]).unwrap();
        let s = CentroidSet::new(vec![pt(&[0.0, 0.0]), pt(&[4.0, 0.0])]).unwrap();
        let tol = default_grouping_tolerance(&x, &s).unwrap();
        let w = detect_cycle(&x, &s, tol).unwrap().unwrap();
        let f = AnnihilatingFunctional::from_witness(&x, &s, &w, tol).unwrap();
        (x, s, tol, f)
    }

    #[test]
    fn functional_apply_examples() {
        let (_, _, _, f) = two_point_setup();
        // canonical witness is (1, -1); |F| on the sign target is the norm
        assert_eq!(f.norm(), 2);
        let worst = f.worst_case_target();
        assert_eq!(f.apply(&worst).unwrap().abs(), 2.0);
        // constants are killed because the lambda entries sum to zero
        assert_eq!(f.apply(&[3.7, 3.7]).unwrap(), 0.0);
        assert!(matches!(
            f.apply(&[1.0]),
            Err(DualityError::ValueLengthMismatch { .. })
        ));
    }

    #[test]
    fn worst_case_target_is_the_sign_vector() {
        let (_, _, _, f) = two_point_setup();
        let worst = f.worst_case_target();
        assert_eq!(worst, vec![1.0, -1.0]); // signs of the canonical (1, -1)
        let embedded = f.worst_case_target_embedded(4);
        assert_eq!(embedded, vec![1.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn lower_bound_examples() {
        let (_, _, _, f) = two_point_setup();
        let worst = f.worst_case_target();
        assert_eq!(f.lower_bound(&worst).unwrap(), 1.0);
        assert_eq!(f.lower_bound(&[5.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn lower_bound_is_scale_invariant_in_lambda() {
        // Rescaling lambda by an integer scales numerator and norm alike.
        let (x, s, tol, f) = two_point_setup();
        let scaled = CycleWitness::new(vec![3, -3]).unwrap();
        let f3 = AnnihilatingFunctional::from_witness(&x, &s, &scaled, tol).unwrap();
        let target = [0.8, -0.3];
        assert!(
            (f.lower_bound(&target).unwrap() - f3.lower_bound(&target).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn single_atom_annihilates_exactly() {
        let (x, s, tol, f) = two_point_setup();
        let model = ShiftedRbfModel::new(
            vec![RbfTerm {
                weight: 2.5,
                centroid: s.get(0).clone(),
                shift: 0.7,
            }],
            builtin("gaussian").unwrap(),
        )
        .unwrap();
        let check = check_annihilation(&f, &x, &s, &model, tol).unwrap();
        // equal distances give bit-identical activation values
        assert_eq!(check.value, 0.0);
        assert!(check.passes());
    }

    #[test]
    fn centroid_outside_set_is_an_error_not_a_small_value() {
        let (x, s, tol, f) = two_point_setup();
        let model = ShiftedRbfModel::new(
            vec![RbfTerm {
                weight: 1.0,
                centroid: pt(&[1.0, 1.0]),
                shift: 0.0,
            }],
            builtin("gaussian").unwrap(),
        )
        .unwrap();
        assert!(matches!(
            check_annihilation(&f, &x, &s, &model, tol),
            Err(DualityError::CentroidOutsideSet { index: 0 })
        ));
    }

    #[test]
    fn from_witness_rejects_non_annihilating_lambda() {
        let x = PointConfiguration::new(vec![pt(&[2.0, 1.0]), pt(&[2.0, -1.0])]).unwrap();
        let s = CentroidSet::new(vec![pt(&[0.0, 0.0]), pt(&[4.0, 0.0])]).unwrap();
        let tol = default_grouping_tolerance(&x, &s).unwrap();
        let bogus = CycleWitness::new(vec![1, 1]).unwrap();
        assert!(matches!(
            AnnihilatingFunctional::from_witness(&x, &s, &bogus, tol),
            Err(DualityError::WitnessRejected)
        ));
    }
}
