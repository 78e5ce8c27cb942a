//! Spectrum assembly: merging the two parity blocks into the physical level
//! sequence E₁ < E₂ < …, synthesizing eigenfunctions from their trigonometric
//! coefficients, node counting, the large-n asymptotic comparison, and the
//! closed-form ground-state approximant.
//!
//! Everything here is a pure transformation over solver output; the heavy
//! numerics live in [`crate::galerkin`] and [`crate::eigensolver`].

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::eigensolver::EigenPair;
use crate::galerkin::mode_of;
use crate::math;
use crate::operator::{BasisIndex, Parity};

/// Leading coefficient of [`ground_state_approximant`]: the reciprocal of the
/// L² norm of √((1−x²)·cos(αx)) over (−1,1), rounded to the six digits used
/// throughout the reporting layer.
pub const APPROXIMANT_SCALE: f64 = 0.921749;

/// Frequency α = 1443π/4096 of the approximant's interior cosine.
pub const APPROXIMANT_ALPHA: f64 = 1443.0 * PI / 4096.0;

/// Magnitude floor for node counting: samples below this are treated as zero
/// so the machine-scale oscillation of truncated series near ±1 is not
/// mistaken for sign changes.
pub const NODE_FLOOR: f64 = 1e-9;

/// One merged level, labelled 1-based in energy order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
    pub parity: Parity,
    /// Dimension of the parity block this level came out of (0 when the
    /// solve was values-only and the caller has not filled it in).
    pub source_block_size: usize,
}

impl Level {
    /// Trustworthiness heuristic: low levels stabilize long before the block
    /// dimension, so a level is flagged converged when `n ≤ m/4`.
    pub fn is_converged(&self) -> bool {
        4 * self.n <= self.source_block_size
    }
}

/// Comparison of one level against the large-n law `nπ/2 − π/8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRow {
    pub n: usize,
    pub estimate: f64,
    /// Unsigned fraction `|Eₙ − estimate| / Eₙ` (multiply by 100 for the
    /// percent column the reporting layer prints).
    pub relative_error: f64,
}

/// An external published value to diff against, with its provenance tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValue {
    pub n: usize,
    pub value: f64,
    pub source: String,
}

/// Output row of [`compare_references`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceComparison {
    pub n: usize,
    pub abs_diff: f64,
    /// `abs_diff` relative to the reference value.
    pub rel_diff: f64,
}

/// The merged physical spectrum plus its asymptotic comparison columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub levels: Vec<Level>,
    pub asymptotic: Vec<AsymptoticRow>,
    pub references: Option<Vec<ReferenceValue>>,
}

/// An eigenfunction sampled on a grid in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// 1-based level label; [`synthesize`] cannot know it (an [`EigenPair`]
    /// carries no merged label), so it leaves 0 for the caller to fill.
    pub label: usize,
    /// Trapezoidal estimate of the L² norm over the grid; 1 within 1e-6 on
    /// grids of ≥ 2001 points since both trigonometric bases are orthonormal
    /// over (−1, 1) and the coefficient vectors are unit length.
    pub normalization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumError {
    /// An input eigenvalue list was not sorted ascending.
    NotSorted { parity: Parity },
    /// A pair in the `even` (resp. `odd`) argument carried the other parity.
    MixedParity { expected: Parity },
    /// More levels requested than the two lists hold together.
    CountTooLarge { count: usize, available: usize },
    /// Merged energies failed strict monotonicity at label `n`.
    NonMonotonic { n: usize },
    /// Merged parities broke the even/odd/even/… alternation at label `n`.
    /// This signals an assembly or solver bug upstream, not bad user input:
    /// the operator's level ordering alternates parity by the oscillation
    /// argument, so a computed spectrum that does not is wrong.
    ParityAlternation {
        n: usize,
        expected: Parity,
        found: Parity,
    },
    /// [`synthesize`] needs coefficient vectors; the pair had none.
    MissingVector,
    /// Grid value outside `[−1, 1]` or not finite.
    GridOutOfDomain { index: usize },
    /// Grid not strictly increasing.
    GridNotIncreasing { index: usize },
    /// Empty grid where samples were required.
    EmptyGrid,
    /// Argument outside `[−1, 1]` in [`ground_state_approximant`].
    OutOfDomain { x: f64 },
    /// Radicand of the approximant went negative (unreachable on `[−1, 1]`
    /// because α < π/2, but reported rather than silently clamped).
    NegativeRadicand { x: f64 },
    /// [`compare_references`] met a label absent from the report.
    UnknownLabel { n: usize },
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::NotSorted { parity } => {
                write!(f, "{parity} eigenvalue list is not sorted ascending")
            }
            SpectrumError::MixedParity { expected } => {
                write!(f, "pair with wrong parity in the {expected} list")
            }
            SpectrumError::CountTooLarge { count, available } => {
                write!(
                    f,
                    "requested {count} levels but only {available} are available"
                )
            }
            SpectrumError::NonMonotonic { n } => {
                write!(
                    f,
                    "merged energies are not strictly increasing at level {n}"
                )
            }
            SpectrumError::ParityAlternation { n, expected, found } => write!(
                f,
                "parity alternation violated at level {n}: expected {expected}, found {found} \
                 (this indicates an assembly or solver bug)"
            ),
            SpectrumError::MissingVector => {
                write!(f, "eigenpair has no coefficient vector to synthesize from")
            }
            SpectrumError::GridOutOfDomain { index } => {
                write!(f, "grid point {index} is outside [-1, 1]")
            }
            SpectrumError::GridNotIncreasing { index } => {
                write!(f, "grid is not strictly increasing at position {index}")
            }
            SpectrumError::EmptyGrid => write!(f, "empty sample grid"),
            SpectrumError::OutOfDomain { x } => {
                write!(f, "argument {x} is outside [-1, 1]")
            }
            SpectrumError::NegativeRadicand { x } => {
                write!(f, "approximant radicand is negative at {x}")
            }
            SpectrumError::UnknownLabel { n } => {
                write!(f, "reference label {n} is not present in the report")
            }
        }
    }
}

impl core::error::Error for SpectrumError {}

/// Asymptotic estimate `nπ/2 − π/8` for the 1-based level `n`.
pub fn asymptotic_estimate(n: usize) -> f64 {
    n as f64 * PI / 2.0 - PI / 8.0
}

/// Merge the two parity solves into the physical spectrum.
///
/// Both inputs must be sorted ascending; `count` levels are taken in energy
/// order, labelled n = 1, 2, …, and checked for strict monotonicity and for
/// the even/odd parity alternation. The asymptotic rows are filled from
/// [`asymptotic_estimate`].
pub fn merge(
    even: &[EigenPair],
    odd: &[EigenPair],
    count: usize,
) -> Result<SpectrumReport, SpectrumError> {
    check_sorted(even, Parity::Even)?;
    check_sorted(odd, Parity::Odd)?;
    let available = even.len() + odd.len();
    if count > available {
        return Err(SpectrumError::CountTooLarge { count, available });
    }

    let mut levels = Vec::with_capacity(count);
    let (mut ie, mut io) = (0usize, 0usize);
    while levels.len() < count {
        let take_even = match (even.get(ie), odd.get(io)) {
            (Some(e), Some(o)) => e.value <= o.value,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!("count bounded by available above"),
        };
        let n = levels.len() + 1;
        let pair = if take_even {
            ie += 1;
            &even[ie - 1]
        } else {
            io += 1;
            &odd[io - 1]
        };
        levels.push(Level {
            n,
            energy: pair.value,
            parity: pair.parity,
            source_block_size: pair.vector.len(),
        });
    }

    for w in levels.windows(2) {
        if w[1].energy.partial_cmp(&w[0].energy) != Some(core::cmp::Ordering::Greater) {
            return Err(SpectrumError::NonMonotonic { n: w[1].n });
        }
    }
    for level in &levels {
        let expected = if level.n % 2 == 1 {
            Parity::Even
        } else {
            Parity::Odd
        };
        if level.parity != expected {
            return Err(SpectrumError::ParityAlternation {
                n: level.n,
                expected,
                found: level.parity,
            });
        }
    }

    let asymptotic = levels
        .iter()
        .map(|l| {
            let estimate = asymptotic_estimate(l.n);
            AsymptoticRow {
                n: l.n,
                estimate,
                relative_error: math::abs(l.energy - estimate) / l.energy,
            }
        })
        .collect();

    Ok(SpectrumReport {
        levels,
        asymptotic,
        references: None,
    })
}

fn check_sorted(pairs: &[EigenPair], expected: Parity) -> Result<(), SpectrumError> {
    for pair in pairs {
        if pair.parity != expected {
            return Err(SpectrumError::MixedParity { expected });
        }
    }
    for w in pairs.windows(2) {
        if w[1].value < w[0].value {
            return Err(SpectrumError::NotSorted { parity: expected });
        }
    }
    Ok(())
}

/// Evaluate the eigenfunction ψ(x) = Σₖ cₖ·basisₖ(x) on `grid`.
///
/// The grid must be strictly increasing and lie inside `[−1, 1]`. Endpoint
/// samples are exactly 0 — every basis function vanishes there, and writing
/// the zero directly keeps the output bitwise clean. The `label` field is
/// left 0 for the caller.
pub fn synthesize(pair: &EigenPair, grid: &[f64]) -> Result<SampledFunction, SpectrumError> {
    if grid.is_empty() {
        return Err(SpectrumError::EmptyGrid);
    }
    if pair.vector.is_empty() {
        return Err(SpectrumError::MissingVector);
    }
    for (i, &x) in grid.iter().enumerate() {
        if !(x.is_finite() && (-1.0..=1.0).contains(&x)) {
            return Err(SpectrumError::GridOutOfDomain { index: i });
        }
        if i > 0 && x <= grid[i - 1] {
            return Err(SpectrumError::GridNotIncreasing { index: i });
        }
    }
    let basis: Vec<BasisIndex> = (0..pair.vector.len())
        .map(|j| {
            BasisIndex::new(pair.parity, mode_of(pair.parity, j))
                .expect("storage index always maps to a valid mode")
        })
        .collect();

    let values: Vec<f64> = grid
        .iter()
        .map(|&x| {
            if x == 1.0 || x == -1.0 {
                return 0.0;
            }
            let mut acc = 0.0;
            for (c, b) in pair.vector.iter().zip(basis.iter()) {
                acc += c * b.value(x);
            }
            acc
        })
        .collect();

    let normalization = trapezoid_l2(grid, &values);
    Ok(SampledFunction {
        grid: grid.to_vec(),
        values,
        label: 0,
        normalization,
    })
}

/// Trapezoidal L² norm of sampled values.
fn trapezoid_l2(grid: &[f64], values: &[f64]) -> f64 {
    if grid.len() < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 1..grid.len() {
        let dx = grid[i] - grid[i - 1];
        acc += 0.5 * dx * (values[i] * values[i] + values[i - 1] * values[i - 1]);
    }
    math::sqrt(acc)
}

/// Count strict sign changes on the open interval, treating samples with
/// magnitude below [`NODE_FLOOR`] (and the endpoint zeros) as no-opinion.
///
/// Meant for grids of ≥ 2001 points; coarser grids can miss close node pairs.
pub fn count_nodes(f: &SampledFunction) -> usize {
    let mut changes = 0usize;
    let mut last_sign = 0i8;
    for (&x, &v) in f.grid.iter().zip(f.values.iter()) {
        if x == -1.0 || x == 1.0 || math::abs(v) < NODE_FLOOR {
            continue;
        }
        let sign = if v > 0.0 { 1i8 } else { -1i8 };
        if last_sign != 0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    changes
}

/// Closed-form ground-state approximant `0.921749·√((1−x²)·cos(αx))` with
/// α = 1443π/4096.
///
/// The radicand is nonnegative on all of `[−1, 1]` because α < π/2; a
/// negative radicand is therefore reported as an error rather than clamped.
pub fn ground_state_approximant(x: f64) -> Result<f64, SpectrumError> {
    if !(x.is_finite() && (-1.0..=1.0).contains(&x)) {
        return Err(SpectrumError::OutOfDomain { x });
    }
    let radicand = (1.0 - x * x) * math::cos(APPROXIMANT_ALPHA * x);
    if radicand < 0.0 {
        return Err(SpectrumError::NegativeRadicand { x });
    }
    Ok(APPROXIMANT_SCALE * math::sqrt(radicand))
}

/// Diff report levels against external published values.
///
/// `rel_diff` is relative to the reference value. Labels absent from the
/// report are an error; an empty reference list yields an empty output.
pub fn compare_references(
    report: &SpectrumReport,
    references: &[ReferenceValue],
) -> Result<Vec<ReferenceComparison>, SpectrumError> {
    references
        .iter()
        .map(|r| {
            let level = report
                .levels
                .iter()
                .find(|l| l.n == r.n)
                .ok_or(SpectrumError::UnknownLabel { n: r.n })?;
            let abs_diff = math::abs(level.energy - r.value);
            Ok(ReferenceComparison {
                n: r.n,
                abs_diff,
                rel_diff: abs_diff / math::abs(r.value),
            })
        })
        .collect()
}

/// Uniform grid of `points` samples on `[−1, 1]` with bitwise-exact
/// endpoints. Returns an empty vector for `points < 2`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    if points < 2 {
        return Vec::new();
    }
    let h = 2.0 / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| -1.0 + i as f64 * h).collect();
    grid[0] = -1.0;
    grid[points - 1] = 1.0;
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn pair(value: f64, parity: Parity, dim: usize) -> EigenPair {
        EigenPair {
            value,
            vector: vec![0.0; dim],
            parity,
            residual: 0.0,
        }
    }

    #[test]
    fn merge_interleaves_six_levels() {
        let even = vec![
            pair(1.1704897, Parity::Even, 3),
            pair(4.35648331, Parity::Even, 3),
            pair(7.52131594, Parity::Even, 3),
        ];
        let odd = vec![
            pair(2.780209, Parity::Odd, 3),
            pair(5.9397942, Parity::Odd, 3),
            pair(9.099426, Parity::Odd, 3),
        ];
        let report = merge(&even, &odd, 6).unwrap();
        let energies: Vec<f64> = report.levels.iter().map(|l| l.energy).collect();
        assert_eq!(
            energies,
            vec![1.1704897, 2.780209, 4.35648331, 5.9397942, 7.52131594, 9.099426]
        );
        for (i, level) in report.levels.iter().enumerate() {
            assert_eq!(level.n, i + 1);
            let expected = if (i + 1) % 2 == 1 {
                Parity::Even
            } else {
                Parity::Odd
            };
            assert_eq!(level.parity, expected);
        }
        // Asymptotic row 1: estimate 3π/8, relative error |E−est|/E.
        let row = &report.asymptotic[0];
        assert!((row.estimate - 3.0 * PI / 8.0).abs() < 1e-15);
        let expect = (1.1704897f64 - 3.0 * PI / 8.0).abs() / 1.1704897;
        assert!((row.relative_error - expect).abs() < 1e-15);
    }

    #[test]
    fn merge_degenerate_single_even() {
        let even = vec![pair(1.21531728, Parity::Even, 1)];
        let report = merge(&even, &[], 1).unwrap();
        assert_eq!(report.levels.len(), 1);
        assert_eq!(report.levels[0].n, 1);
        assert_eq!(report.levels[0].parity, Parity::Even);
        assert_eq!(report.levels[0].source_block_size, 1);
    }

    #[test]
    fn merge_rejects_bad_input() {
        let even = vec![pair(2.0, Parity::Even, 1), pair(1.0, Parity::Even, 1)];
        assert!(matches!(
            merge(&even, &[], 1),
            Err(SpectrumError::NotSorted { .. })
        ));

        let even = vec![pair(1.0, Parity::Even, 1)];
        assert!(matches!(
            merge(&even, &[], 2),
            Err(SpectrumError::CountTooLarge {
                count: 2,
                available: 1
            })
        ));

        let mislabeled = vec![pair(1.0, Parity::Odd, 1)];
        assert!(matches!(
            merge(&mislabeled, &[], 1),
            Err(SpectrumError::MixedParity {
                expected: Parity::Even
            })
        ));
    }

    #[test]
    fn merge_detects_parity_alternation_violation() {
        // Two even levels below the first odd one: levels 1 and 2 both even.
        let even = vec![pair(1.0, Parity::Even, 2), pair(1.5, Parity::Even, 2)];
        let odd = vec![pair(2.0, Parity::Odd, 2)];
        assert!(matches!(
            merge(&even, &odd, 2),
            Err(SpectrumError::ParityAlternation { n: 2, .. })
        ));
        // Taking only the ground state is fine.
        assert!(merge(&even, &odd, 1).is_ok());
    }

    #[test]
    fn convergence_heuristic() {
        let level = Level {
            n: 7,
            energy: 1.0,
            parity: Parity::Even,
            source_block_size: 30,
        };
        assert!(level.is_converged());
        let level = Level {
            n: 8,
            energy: 1.0,
            parity: Parity::Odd,
            source_block_size: 30,
        };
        assert!(!level.is_converged());
    }

    #[test]
    fn synthesize_two_term_ground_state() {
        // Sign convention flips the published 2-term vector so the dominant
        // coefficient is positive; at x = 0 both cosines are 1.
        let p = EigenPair {
            value: 1.191256,
            vector: vec![0.996257, -0.086437],
            parity: Parity::Even,
            residual: 0.0,
        };
        let grid = uniform_grid(2001);
        let f = synthesize(&p, &grid).unwrap();
        let mid = f.values[1000];
        assert!((mid - 0.90982).abs() < 1e-5, "ψ(0) = {mid}");
        assert_eq!(f.values[0], 0.0);
        assert_eq!(f.values[2000], 0.0);
    }

    #[test]
    fn synthesize_odd_vanishes_at_origin() {
        let p = EigenPair {
            value: 2.8,
            vector: vec![0.9, 0.4, 0.1],
            parity: Parity::Odd,
            residual: 0.0,
        };
        let f = synthesize(&p, &uniform_grid(2001)).unwrap();
        assert!(f.values[1000].abs() < 1e-15);
        assert_eq!(f.values[0], 0.0);
    }

    #[test]
    fn synthesize_normalization_for_unit_vector() {
        let p = pair_with_vector(vec![1.0], Parity::Even);
        let f = synthesize(&p, &uniform_grid(2001)).unwrap();
        assert!(
            (f.normalization - 1.0).abs() < 1e-6,
            "norm = {}",
            f.normalization
        );
    }

    fn pair_with_vector(v: Vec<f64>, parity: Parity) -> EigenPair {
        EigenPair {
            value: 1.0,
            vector: v,
            parity,
            residual: 0.0,
        }
    }

    #[test]
    fn synthesize_rejects_bad_grids() {
        let p = pair_with_vector(vec![1.0], Parity::Even);
        assert!(matches!(synthesize(&p, &[]), Err(SpectrumError::EmptyGrid)));
        assert!(matches!(
            synthesize(&p, &[-1.5, 0.0]),
            Err(SpectrumError::GridOutOfDomain { index: 0 })
        ));
        assert!(matches!(
            synthesize(&p, &[0.0, 0.0]),
            Err(SpectrumError::GridNotIncreasing { index: 1 })
        ));
        let empty = pair_with_vector(Vec::new(), Parity::Even);
        assert!(matches!(
            synthesize(&empty, &[0.0]),
            Err(SpectrumError::MissingVector)
        ));
    }

    #[test]
    fn node_counting() {
        // sin(πx) has exactly one node in (−1, 1), at the origin.
        let p = pair_with_vector(vec![1.0], Parity::Odd);
        let f = synthesize(&p, &uniform_grid(2001)).unwrap();
        assert_eq!(count_nodes(&f), 1);

        // cos(πx/2) has none.
        let p = pair_with_vector(vec![1.0], Parity::Even);
        let f = synthesize(&p, &uniform_grid(2001)).unwrap();
        assert_eq!(count_nodes(&f), 0);

        // Noise below the floor does not count.
        let f = SampledFunction {
            grid: vec![-0.5, -0.25, 0.0, 0.25, 0.5],
            values: vec![1.0, 1e-12, -1e-12, 1e-12, 1.0],
            label: 0,
            normalization: 1.0,
        };
        assert_eq!(count_nodes(&f), 0);
    }

    #[test]
    fn approximant_values() {
        assert!((ground_state_approximant(0.0).unwrap() - APPROXIMANT_SCALE).abs() < 1e-15);
        assert_eq!(ground_state_approximant(1.0).unwrap(), 0.0);
        assert_eq!(ground_state_approximant(-1.0).unwrap(), 0.0);
        // Symmetric in x.
        let a = ground_state_approximant(0.63).unwrap();
        let b = ground_state_approximant(-0.63).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            ground_state_approximant(1.0001),
            Err(SpectrumError::OutOfDomain { .. })
        ));
        assert!(matches!(
            ground_state_approximant(f64::NAN),
            Err(SpectrumError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn reference_comparison() {
        let even = vec![pair(1.157791, Parity::Even, 10000)];
        let report = merge(&even, &[], 1).unwrap();
        let refs = vec![ReferenceValue {
            n: 1,
            value: 1.1577738,
            source: "external".to_string(),
        }];
        let diffs = compare_references(&report, &refs).unwrap();
        assert_eq!(diffs.len(), 1);
        assert!(diffs[0].abs_diff < 2e-5);
        assert!(compare_references(&report, &[]).unwrap().is_empty());
        let bad = vec![ReferenceValue {
            n: 9,
            value: 1.0,
            source: "x".to_string(),
        }];
        assert!(matches!(
            compare_references(&report, &bad),
            Err(SpectrumError::UnknownLabel { n: 9 })
        ));
    }

    #[test]
    fn uniform_grid_endpoints_exact() {
        let g = uniform_grid(2001);
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[2000], 1.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(g[1000], 0.0);
        assert!(uniform_grid(1).is_empty());
    }
}
