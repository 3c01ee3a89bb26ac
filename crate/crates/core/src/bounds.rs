//! Closed-form bound formulas and decision logic: ball volume, the graph
//! betti/rank bounds, the rank-from-volume bound with its floors, the
//! `log(2k-1)` displacement check, independent-element selection over the
//! abelianization, and the headline linear coefficients.
//!
//! Rational quantities are computed exactly; transcendental ones (`B(r)`,
//! displacement sums) in `f64`.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BoundsError {
    #[error("domain error: {detail}")]
    Domain { detail: String },
    #[error("rank-deficient input: span has rank {found}, need {need}")]
    RankDeficient { found: usize, need: usize },
}

/// Volume of a ball of radius `r` in `H^3`: `pi (sinh 2r - 2r)`.
pub fn ball_volume(r: f64) -> Result<f64, BoundsError> {
    if r <= 0.0 {
        return Err(BoundsError::Domain {
            detail: format!("ball radius must be positive, got {r}"),
        });
    }
    Ok(std::f64::consts::PI * ((2.0 * r).sinh() - 2.0 * r))
}

/// Inputs for the volume-based rank bound.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs {
    pub volume: f64,
    pub epsilon: f64,
    pub big_r: f64,
    pub c: f64,
    pub rho: u32,
    pub b_half_epsilon: f64,
}

/// Graph-shaped inputs for the betti and rank bounds.
#[derive(Debug, Clone)]
pub struct GraphBoundInputs {
    pub edges: u64,
    pub loops: u64,
    pub vertices: u64,
    /// Per-vertex rank of the subgroup generated by the loops based there.
    pub loop_group_ranks: Vec<u64>,
}

impl GraphBoundInputs {
    fn validate(&self) -> Result<(), BoundsError> {
        if self.loops > self.edges {
            return Err(BoundsError::Domain {
                detail: format!("loops {} exceed edges {}", self.loops, self.edges),
            });
        }
        if self.loop_group_ranks.len() as u64 != self.vertices {
            return Err(BoundsError::Domain {
                detail: format!(
                    "rank list length {} does not match vertex count {}",
                    self.loop_group_ranks.len(),
                    self.vertices
                ),
            });
        }
        Ok(())
    }
}

/// Upper bound for the first betti number of the pruned loopless subgraph:
/// `15/16 (E - L) - s + 1`, exact.
pub fn betti_bound(g: &GraphBoundInputs) -> Result<Rational64, BoundsError> {
    g.validate()?;
    let e_minus_l = (g.edges - g.loops) as i64;
    Ok(Rational64::new(15 * e_minus_l, 16) - Rational64::from_integer(g.vertices as i64 - 1))
}

/// Graph-level rank bound: `15/16 E - s + 1 + 1/16 sum(rank X_v)`, exact.
pub fn rank_bound_graph(g: &GraphBoundInputs) -> Result<Rational64, BoundsError> {
    g.validate()?;
    let rank_sum: i64 = g.loop_group_ranks.iter().map(|&r| r as i64).sum();
    Ok(Rational64::new(15 * g.edges as i64, 16)
        - Rational64::from_integer(g.vertices as i64 - 1)
        + Rational64::new(rank_sum, 16))
}

/// Intermediate values reported alongside the volume-based rank bound.
#[derive(Debug, Clone, Copy)]
pub struct RankVolumeBound {
    pub ball_volume_r: f64,
    /// `floor((B(R) - b) / c)` — the valence cap.
    pub valence_cap: i64,
    /// `floor(V / b)` — the net-size cap.
    pub net_cap: i64,
    /// `max(0, 15/32 valence_cap - 1 + rho/16)`, exact.
    pub per_vertex_term: Rational64,
    /// `1 + net_cap * per_vertex_term`, exact.
    pub bound: Rational64,
}

/// The rank bound `1 + floor(V/b) * max(0, 15/32 floor((B(R)-b)/c) - 1 + rho/16)`.
///
/// The geometric side conditions on `c` (the lower bounds through the packing
/// function on its admissible domain, and `B(epsilon/2) > c`) are the
/// caller's responsibility; that function lives outside this artifact.
pub fn rank_volume_bound(inp: &BoundInputs) -> Result<RankVolumeBound, BoundsError> {
    if !(2.0 * inp.epsilon < inp.big_r && inp.big_r < 2.5 * inp.epsilon) {
        return Err(BoundsError::Domain {
            detail: format!(
                "R = {} violates 2*eps < R < 5*eps/2 for eps = {}",
                inp.big_r, inp.epsilon
            ),
        });
    }
    if inp.volume <= 0.0 || inp.b_half_epsilon <= 0.0 || inp.c <= 0.0 {
        return Err(BoundsError::Domain {
            detail: "volume, b(eps/2), and c must be positive".into(),
        });
    }
    let b_r = ball_volume(inp.big_r)?;
    let valence_cap = ((b_r - inp.b_half_epsilon) / inp.c).floor() as i64;
    let net_cap = (inp.volume / inp.b_half_epsilon).floor() as i64;
    let term = Rational64::new(15 * valence_cap, 32) - Rational64::from_integer(1)
        + Rational64::new(inp.rho as i64, 16);
    let per_vertex_term = if term.is_negative() {
        Rational64::zero()
    } else {
        term
    };
    Ok(RankVolumeBound {
        ball_volume_r: b_r,
        valence_cap,
        net_cap,
        per_vertex_term,
        bound: Rational64::from_integer(1) + Rational64::from_integer(net_cap) * per_vertex_term,
    })
}

/// Specialized corollary bound `1 + floor(V/b) * (146.1875 + rho/16)`, exact
/// (146.1875 = 2339/16).
pub fn corollary_bound(volume: f64, rho: u32, b: f64) -> Result<Rational64, BoundsError> {
    if volume <= 0.0 || b <= 0.0 {
        return Err(BoundsError::Domain {
            detail: "volume and b must be positive".into(),
        });
    }
    let net_cap = (volume / b).floor() as i64;
    let coeff = Rational64::new(2339, 16) + Rational64::new(rho as i64, 16);
    Ok(Rational64::from_integer(1) + Rational64::from_integer(net_cap) * coeff)
}

/// The interval of values for `b((log 3)/2)` consistent with this parameter
/// set: `b > 146.4375 / 157.497` (so the five-free coefficient holds) and
/// `(B(R) - b)/c in [314.62, 314.63)` with `R = 2 log 3 + 0.15`, `c = 0.496`.
pub fn accepted_b_interval() -> (f64, f64) {
    let b_r = ball_volume(2.0 * 3.0f64.ln() + 0.15).expect("radius positive");
    let lo = 146.4375 / 157.497;
    let hi = b_r - 0.496 * 314.62;
    (lo, hi)
}

/// Default value of the supplied constant `b((log 3)/2)`.
pub const B_HALF_LOG3_DEFAULT: f64 = 0.93;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplacementVerdict {
    /// The sum is at most 1/2: consistent with independence.
    Consistent,
    /// The sum exceeds 1/2: the elements cannot be independent.
    Violates,
}

#[derive(Debug, Clone)]
pub struct DisplacementCheck {
    pub sum: f64,
    pub verdict: DisplacementVerdict,
    pub max_displacement: f64,
    pub log_2k_minus_1: f64,
}

/// Evaluates `sum 1/(1 + e^{d_i})` against 1/2. A sum above 1/2 certifies
/// that no group contains k independent elements with these displacements;
/// a sum at or below 1/2 is merely consistent with independence.
pub fn log2k1_check(displacements: &[f64]) -> Result<DisplacementCheck, BoundsError> {
    if displacements.iter().any(|&d| d < 0.0) {
        return Err(BoundsError::Domain {
            detail: "displacements must be non-negative".into(),
        });
    }
    let k = displacements.len();
    let sum: f64 = displacements.iter().map(|&d| 1.0 / (1.0 + d.exp())).sum();
    let max_displacement = displacements.iter().copied().fold(0.0f64, f64::max);
    Ok(DisplacementCheck {
        sum,
        verdict: if sum > 0.5 {
            DisplacementVerdict::Violates
        } else {
            DisplacementVerdict::Consistent
        },
        max_displacement,
        log_2k_minus_1: if k >= 1 {
            ((2 * k - 1) as f64).ln()
        } else {
            0.0
        },
    })
}

/// Picks `r` inputs whose abelianized images are linearly independent over
/// the rationals, by fraction-free Gaussian elimination in input order
/// (first usable pivot wins).
pub fn select_independent(
    abelianized_images: &[Vec<i64>],
    r: usize,
) -> Result<Vec<usize>, BoundsError> {
    let mut selected: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<i128>> = Vec::new();
    for (idx, image) in abelianized_images.iter().enumerate() {
        if selected.len() == r {
            break;
        }
        let mut v: Vec<i128> = image.iter().map(|&x| x as i128).collect();
        // Reduce against the triangular basis.
        for b in &basis {
            let pivot_col = b.iter().position(|&x| x != 0).unwrap();
            if v.len() <= pivot_col {
                continue;
            }
            let (vp, bp) = (v[pivot_col], b[pivot_col]);
            if vp != 0 {
                for i in 0..v.len().min(b.len()) {
                    v[i] = v[i] * bp - b[i] * vp;
                }
            }
        }
        if v.iter().any(|&x| x != 0) {
            basis.push(v);
            selected.push(idx);
        }
    }
    if selected.len() < r {
        return Err(BoundsError::RankDeficient {
            found: selected.len(),
            need: r,
        });
    }
    Ok(selected)
}

/// Subgroup-rank hypotheses under which the corollary bound is invoked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Every rank-<=k subgroup is free.
    KFree(u32),
    /// Every rank-<=k subgroup is a free product of free abelian groups
    /// (k odd in the intended uses).
    Semifree(u32),
}

#[derive(Debug, Clone)]
pub struct RhoOutcome {
    pub rho: u32,
    /// The displacement check with k = 5; a violation contradicts the mode
    /// hypothesis and is surfaced here rather than hidden.
    pub consistency: Option<DisplacementCheck>,
}

/// Maps the mode to the loop-subgroup rank cap: `KFree(k) -> k - 1`,
/// `Semifree(2k-1) -> 2k - 2`. All supplied displacements must sit below
/// `log 9`, the regime in which the corollary applies.
pub fn rho_from_mode(mode: RankMode, loop_displacements: &[f64]) -> Result<RhoOutcome, BoundsError> {
    let log9 = 9.0f64.ln();
    if let Some(&d) = loop_displacements.iter().find(|&&d| d >= log9) {
        return Err(BoundsError::Domain {
            detail: format!("loop displacement {d} is not below log 9"),
        });
    }
    let rho = match mode {
        RankMode::KFree(k) if k >= 1 => k - 1,
        RankMode::Semifree(k) if k >= 2 => k - 1,
        _ => {
            return Err(BoundsError::Domain {
                detail: "mode parameter too small".into(),
            })
        }
    };
    let consistency = if loop_displacements.is_empty() {
        None
    } else {
        let padded: Vec<f64> = loop_displacements.to_vec();
        Some(log2k1_check(&padded[..padded.len().min(5)])?)
    };
    Ok(RhoOutcome { rho, consistency })
}

/// Manifold classes with headline linear coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadlineCase {
    FiveFree,
    NineSemifree,
    ClosedHomology,
    CuspedHomology,
}

/// Headline coefficients as stated; they are inputs here, while the
/// consistency checks below re-derive the arithmetic that pins them.
pub const COEFF_FIVE_FREE: f64 = 157.497;
pub const COEFF_NINE_SEMIFREE: f64 = 157.766;
pub const COEFF_CLOSED_HOMOLOGY: f64 = 157.763;
pub const COEFF_CUSPED_HOMOLOGY: f64 = 158.12;
/// Volume floors cited from the literature, used as inputs.
pub const VOL_FLOOR_ANY: f64 = 0.94;
pub const VOL_FLOOR_CLOSED_5FREE: f64 = 3.77;
pub const VOL_FLOOR_CUSPED: f64 = 2.848;

#[derive(Debug, Clone)]
pub struct ConsistencyCheck {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct HeadlineReport {
    pub case: HeadlineCase,
    pub volume: f64,
    /// Constant term of the bound (1 for the rank bounds, 0 for homology).
    pub constant: f64,
    pub coefficient: f64,
    pub bound: f64,
    /// For the homology cases, the low-dimension branch `11 V` that applies
    /// when the homology dimension is at most 10.
    pub low_dim_branch: Option<f64>,
    pub checks: Vec<ConsistencyCheck>,
}

/// Evaluates the headline bound chain for the given case, together with the
/// arithmetic identities that derive each coefficient.
pub fn headline_bounds(
    volume: f64,
    case: HeadlineCase,
    b: f64,
) -> Result<HeadlineReport, BoundsError> {
    if volume <= 0.0 {
        return Err(BoundsError::Domain {
            detail: "volume must be positive".into(),
        });
    }
    let mut checks = Vec::new();
    let mut check = |label: &str, lhs: f64, rhs: f64| {
        checks.push(ConsistencyCheck {
            label: label.to_string(),
            lhs,
            rhs,
            pass: lhs < rhs,
        });
    };
    // The b-dependent derivations: coefficient = (146.1875 + rho/16)/b.
    check("(146.1875 + 4/16)/b < 157.497", 146.4375 / b, COEFF_FIVE_FREE);
    check(
        "(146.1875 + 8/16)/b < 157.766",
        146.6875 / b,
        COEFF_NINE_SEMIFREE,
    );
    check(
        "1/3.77 + 157.497 < 157.763",
        1.0 / VOL_FLOOR_CLOSED_5FREE + COEFF_FIVE_FREE,
        COEFF_CLOSED_HOMOLOGY,
    );
    check(
        "1/2.848 + 157.766 < 158.12",
        1.0 / VOL_FLOOR_CUSPED + COEFF_NINE_SEMIFREE,
        COEFF_CUSPED_HOMOLOGY,
    );

    let (constant, coefficient, low_dim_branch) = match case {
        HeadlineCase::FiveFree => (1.0, COEFF_FIVE_FREE, None),
        HeadlineCase::NineSemifree => (1.0, COEFF_NINE_SEMIFREE, None),
        HeadlineCase::ClosedHomology => (0.0, COEFF_CLOSED_HOMOLOGY, Some(11.0 * volume)),
        HeadlineCase::CuspedHomology => (0.0, COEFF_CUSPED_HOMOLOGY, Some(11.0 * volume)),
    };
    Ok(HeadlineReport {
        case,
        volume,
        constant,
        coefficient,
        bound: constant + coefficient * volume,
        low_dim_branch,
        checks,
    })
}
