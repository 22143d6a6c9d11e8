//! Sound upper bounds for the hypergraph Ramsey numbers driving the
//! extraction pipeline, composed exactly as the stage arithmetic requires.
//!
//! Values along the chain outgrow any fixed-width integer almost
//! immediately, and past a few parameter steps they outgrow arbitrary
//! precision too: the bit length itself becomes astronomical. [`BigBound`]
//! therefore carries either the exact integer or a symbolic marker recording
//! the defining expression and a sound lower bound on the bit length.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Computation cap, in bits. Exact values are materialized only while they
/// stay under this; anything larger becomes symbolic.
pub const BOUND_BIT_CAP: u64 = 1 << 20;

/// Display cap, in decimal digits. Larger exact values print as a marker but
/// retain their exact integer (JSON serialization always emits full decimal).
pub const PRINT_DIGIT_CAP: usize = 2000;

/// An exact non-negative integer, or a symbolic stand-in for a value too
/// large to materialize. `min_bits` is a proven lower bound on the bit
/// length of the symbolized value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BigBound {
    Exact(BigUint),
    Huge { expr: String, min_bits: u64 },
}

impl BigBound {
    pub fn from_u64(v: u64) -> BigBound {
        BigBound::Exact(BigUint::from(v))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BigBound::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            BigBound::Exact(v) => Some(v),
            BigBound::Huge { .. } => None,
        }
    }

    /// Exact value if it fits in a u64.
    pub fn as_u64(&self) -> Option<u64> {
        self.as_exact().and_then(|v| u64::try_from(v).ok())
    }

    pub fn min_bits(&self) -> u64 {
        match self {
            BigBound::Exact(v) => v.bits(),
            BigBound::Huge { min_bits, .. } => *min_bits,
        }
    }

    fn short(&self) -> String {
        match self {
            BigBound::Exact(v) => {
                if v.bits() <= 132 {
                    v.to_string()
                } else {
                    format!("#<{}-bit integer>", v.bits())
                }
            }
            BigBound::Huge { expr, .. } => expr.clone(),
        }
    }

    /// Largest of the two; for symbolic operands the expression records the
    /// max and the bit lower bound is inherited.
    pub fn max(&self, other: &BigBound) -> BigBound {
        match (self, other) {
            (BigBound::Exact(a), BigBound::Exact(b)) => {
                BigBound::Exact(if a >= b { a.clone() } else { b.clone() })
            }
            // A symbolic value exceeds the bit cap, hence any exact value.
            (BigBound::Huge { .. }, BigBound::Exact(_)) => self.clone(),
            (BigBound::Exact(_), BigBound::Huge { .. }) => other.clone(),
            (
                BigBound::Huge { expr: e1, min_bits: b1 },
                BigBound::Huge { expr: e2, min_bits: b2 },
            ) => BigBound::Huge {
                expr: format!("max({e1}, {e2})"),
                min_bits: (*b1).max(*b2),
            },
        }
    }
}

impl fmt::Display for BigBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigBound::Exact(v) => {
                let s = v.to_string();
                if s.len() <= PRINT_DIGIT_CAP {
                    write!(f, "{s}")
                } else {
                    write!(f, "#<{}-digit integer, exceeds print threshold>", s.len())
                }
            }
            BigBound::Huge { expr, min_bits } => {
                write!(f, "#<symbolic {expr}, more than 2^{min_bits}>")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum BigBoundDto {
    Exact { value: String },
    Symbolic { expr: String, min_bits: u64 },
}

impl Serialize for BigBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = match self {
            BigBound::Exact(v) => BigBoundDto::Exact { value: v.to_string() },
            BigBound::Huge { expr, min_bits } => BigBoundDto::Symbolic {
                expr: expr.clone(),
                min_bits: *min_bits,
            },
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigBound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigBound, D::Error> {
        use serde::de::Error as _;
        match BigBoundDto::deserialize(d)? {
            BigBoundDto::Exact { value } => value
                .parse::<BigUint>()
                .map(BigBound::Exact)
                .map_err(D::Error::custom),
            BigBoundDto::Symbolic { expr, min_bits } => Ok(BigBound::Huge { expr, min_bits }),
        }
    }
}

fn huge(expr: String, min_bits: u64) -> BigBound {
    BigBound::Huge {
        expr,
        min_bits: min_bits.max(BOUND_BIT_CAP),
    }
}

/// `2^e`, symbolic once the exponent passes the cap.
pub fn two_pow(e: u64) -> BigBound {
    if e < BOUND_BIT_CAP {
        BigBound::Exact(BigUint::one() << e)
    } else {
        huge(format!("2^{e}"), e)
    }
}

fn saturating_binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `base^exp` under the bit cap.
fn checked_pow(base: &BigUint, exp: u64, expr: impl Fn() -> String) -> BigBound {
    if base.is_zero() {
        return BigBound::Exact(if exp == 0 { BigUint::one() } else { BigUint::zero() });
    }
    if base.is_one() {
        return BigBound::Exact(BigUint::one());
    }
    // bits(base^exp) >= exp * (bits(base) - 1) + 1
    let lower = exp.saturating_mul(base.bits() - 1).saturating_add(1);
    if exp.saturating_mul(base.bits()) > BOUND_BIT_CAP {
        return huge(expr(), lower);
    }
    let mut result = BigUint::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    BigBound::Exact(result)
}

/// Linear combination `p*a + q*b` with small coefficients.
pub fn lin_comb(p: u64, a: &BigBound, q: u64, b: &BigBound) -> BigBound {
    match (a, b) {
        (BigBound::Exact(x), BigBound::Exact(y)) => {
            BigBound::Exact(x * BigUint::from(p) + y * BigUint::from(q))
        }
        _ => huge(
            format!("{p}*{} + {q}*{}", a.short(), b.short()),
            a.min_bits().max(b.min_bits()),
        ),
    }
}

/// `k * a` for a small scalar `k >= 1`.
pub fn scale(k: u64, a: &BigBound) -> BigBound {
    match a {
        BigBound::Exact(x) => BigBound::Exact(x * BigUint::from(k)),
        BigBound::Huge { expr, min_bits } => huge(format!("{k}*{expr}"), *min_bits),
    }
}

/// Sound upper bound for the hypergraph Ramsey number: any ground set of at
/// least this size forces, for every coloring of its `arity`-subsets with at
/// most `colors` colors, a subset of size `target` whose `arity`-subsets all
/// share one color.
///
/// The recursion mirrors the pivot-refinement proof: arity 1 is pigeonhole;
/// higher arities first bound the pivot-sequence length by the bound one
/// arity down, then charge the ground needed to extract that many pivots
/// (each refinement keeps the largest of `colors^(new (arity-1)-subsets)`
/// cells). Soundness, not tightness, is the contract.
pub fn ramsey_upper_bound(colors: &BigBound, arity: u64, target: &BigBound) -> Result<BigBound> {
    if arity == 0 || arity > 32 {
        return Err(Error::BadParameter(format!(
            "coloring arity {arity} outside supported range 1..=32"
        )));
    }
    if colors.min_bits() == 0 {
        return Err(Error::BadParameter("need at least one color".into()));
    }
    Ok(rho(colors, arity, target))
}

pub fn ramsey_upper_bound_u64(colors: u64, arity: u64, target: u64) -> Result<BigBound> {
    ramsey_upper_bound(
        &BigBound::from_u64(colors),
        arity,
        &BigBound::from_u64(target),
    )
}

fn rho(colors: &BigBound, arity: u64, target: &BigBound) -> BigBound {
    // Sets of size at most the arity carry no constraint beyond their own
    // color, so the target itself suffices.
    if let Some(n) = target.as_u64() {
        if n <= arity {
            return target.clone();
        }
    }
    if let Some(1) = colors.as_u64() {
        return target.clone();
    }
    let (f, n) = match (colors, target) {
        (BigBound::Exact(f), BigBound::Exact(n)) => (f, n),
        _ => {
            // rho >= target and (for target > arity) rho >= colors.
            return huge(
                format!("rho({}, {arity}, {})", colors.short(), target.short()),
                colors.min_bits().max(target.min_bits()),
            );
        }
    };
    if arity == 1 {
        // Pigeonhole: colors * (target - 1) + 1.
        let v = f * (n - BigUint::one()) + BigUint::one();
        if v.bits() > BOUND_BIT_CAP {
            return huge(
                format!("rho({}, 1, {})", colors.short(), target.short()),
                f.bits() + n.bits() - 1,
            );
        }
        return BigBound::Exact(v);
    }
    let pivots = rho(colors, arity - 1, target);
    pivot_ground(colors, arity, &pivots, target)
}

/// Ground needed to extract `pivots` pivot elements at the given arity.
fn pivot_ground(colors: &BigBound, arity: u64, pivots: &BigBound, target: &BigBound) -> BigBound {
    let rho_expr =
        || format!("rho({}, {arity}, {})", colors.short(), target.short());
    let f = colors
        .as_exact()
        .expect("symbolic colors are handled before the pivot step");
    let m = match pivots.as_u64() {
        Some(m) => m,
        None => {
            // With at least two colors every refinement past the first
            // arity-2 steps at least doubles the requirement, so the value
            // needs roughly one bit per pivot.
            let lower = pivots.min_bits().max(BOUND_BIT_CAP);
            return huge(rho_expr(), lower);
        }
    };
    if m == 0 {
        return BigBound::Exact(BigUint::zero());
    }
    if m > BOUND_BIT_CAP + 64 {
        return huge(rho_expr(), m.saturating_sub(arity));
    }
    if arity == 2 {
        // Closed form: each step multiplies by `colors` and adds a constant;
        // the requirement is (colors^(m-1) + colors - 2) / (colors - 1).
        return match checked_pow(f, m - 1, rho_expr) {
            BigBound::Exact(p) => {
                let num = p + f - BigUint::from(2u32);
                let den = f - BigUint::one();
                BigBound::Exact(num / den)
            }
            h => h,
        };
    }
    // Backward over pivot steps; the per-step cell count explodes, so the
    // cap trips after a modest number of iterations when it trips at all.
    let mut need = BigUint::zero();
    for i in (0..m).rev() {
        if need.is_zero() {
            need = BigUint::one();
            continue;
        }
        let new_subsets = saturating_binomial(i, arity - 2);
        let cells = match checked_pow(f, new_subsets, rho_expr) {
            BigBound::Exact(c) => c,
            BigBound::Huge { .. } => {
                return huge(rho_expr(), need.bits());
            }
        };
        if cells.bits() + need.bits() > BOUND_BIT_CAP + 1 {
            return huge(rho_expr(), need.bits());
        }
        need = cells * (need - BigUint::one()) + BigUint::from(2u32);
    }
    BigBound::Exact(need)
}

/// The `(colors, arity, target)` triple handed to the Ramsey bound by one
/// pipeline stage. Kept explicit so the composition arithmetic is testable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoArgs {
    pub colors: BigBound,
    pub arity: u64,
    pub target: BigBound,
}

/// Pinned stage: triples of branch indices are colored by subsets of the
/// three positions, and the split needs `3a + 2b` indices when pinning wins.
pub fn pinned_stage_rho(a: &BigBound, b: &BigBound, s: &BigBound) -> RhoArgs {
    RhoArgs {
        colors: BigBound::from_u64(8),
        arity: 3,
        target: lin_comb(3, a, 2, b).max(s),
    }
}

pub fn pinned_stage_bound(a: &BigBound, b: &BigBound, s: &BigBound) -> Result<BigBound> {
    let args = pinned_stage_rho(a, b, s);
    ramsey_upper_bound(&args.colors, args.arity, &args.target)
}

/// Interior stage: quadruples are colored by the set of touching position
/// pairs (15 of them), and the split needs `4c` indices.
pub fn interior_stage_rho(c: &BigBound, s: &BigBound) -> RhoArgs {
    RhoArgs {
        colors: two_pow(15),
        arity: 4,
        target: scale(4, c).max(s),
    }
}

pub fn interior_stage_bound(c: &BigBound, s: &BigBound) -> Result<BigBound> {
    let args = interior_stage_rho(c, s);
    ramsey_upper_bound(&args.colors, args.arity, &args.target)
}

/// Both stages composed: the pinned stage must deliver a clean set large
/// enough to feed the interior stage.
pub fn combined_stage_bound(
    a: &BigBound,
    b: &BigBound,
    c: &BigBound,
    s: &BigBound,
) -> Result<BigBound> {
    let inner = interior_stage_bound(c, s)?;
    pinned_stage_bound(a, b, &inner)
}

/// Touching stage: index pairs are colored by nonempty adjacency profiles
/// between sets of at most `set_cap` vertices, and a monochromatic `2t`-set
/// yields the clique or biclique.
pub fn touching_stage_rho(set_cap: u64, t: u64) -> RhoArgs {
    RhoArgs {
        colors: two_pow(set_cap.saturating_mul(set_cap)),
        arity: 2,
        target: BigBound::from_u64(2 * t),
    }
}

pub fn touching_count_bound(set_cap: u64, t: u64) -> Result<BigBound> {
    let args = touching_stage_rho(set_cap, t);
    ramsey_upper_bound(&args.colors, args.arity, &args.target)
}

/// Every named bound used on the way from `(r, s, t)` to a sufficient web
/// size, with the argument of each Ramsey call kept visible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundChain {
    pub r: u64,
    pub s: u64,
    pub t: u64,
    /// Cap on the touching sets built from a web of shortness `r`:
    /// `max(r + 3, 2r)`.
    pub touch_set_cap: u64,
    pub touching_rho: RhoArgs,
    /// Number of pairwise touching sets that forces the clique or biclique.
    pub touching_count: BigBound,
    pub interior_rho: RhoArgs,
    /// Web size fed to the interior stage.
    pub interior_stage: BigBound,
    pub pinned_rho: RhoArgs,
    /// Web size that runs both stages back to back.
    pub combined_stage: BigBound,
    /// Web size sufficient for the full extraction.
    pub web_size: BigBound,
}

/// Composes the whole chain for the extraction with parameters `(r, s, t)`.
pub fn bound_chain(r: u64, s: u64, t: u64) -> Result<BoundChain> {
    if s == 0 || t == 0 {
        return Err(Error::BadParameter("s and t must be positive".into()));
    }
    let touch_set_cap = (r + 3).max(2 * r);
    let touching_rho = touching_stage_rho(touch_set_cap, t);
    let touching_count =
        ramsey_upper_bound(&touching_rho.colors, touching_rho.arity, &touching_rho.target)?;
    let s_bound = BigBound::from_u64(s);
    let interior_rho = interior_stage_rho(&touching_count, &s_bound);
    let interior_stage =
        ramsey_upper_bound(&interior_rho.colors, interior_rho.arity, &interior_rho.target)?;
    let pinned_rho = pinned_stage_rho(&touching_count, &touching_count, &interior_stage);
    let combined_stage =
        ramsey_upper_bound(&pinned_rho.colors, pinned_rho.arity, &pinned_rho.target)?;
    Ok(BoundChain {
        r,
        s,
        t,
        touch_set_cap,
        touching_rho,
        touching_count,
        interior_rho,
        interior_stage,
        pinned_rho,
        web_size: combined_stage.clone(),
        combined_stage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_u64(b: &BigBound) -> u64 {
        b.as_u64().expect("expected a small exact bound")
    }

    #[test]
    fn pigeonhole_at_arity_one() {
        assert_eq!(exact_u64(&ramsey_upper_bound_u64(2, 1, 4).unwrap()), 7);
        assert_eq!(exact_u64(&ramsey_upper_bound_u64(3, 1, 3).unwrap()), 7);
        assert_eq!(exact_u64(&ramsey_upper_bound_u64(5, 1, 1).unwrap()), 1);
    }

    #[test]
    fn target_at_most_arity_is_free() {
        for (f, g, n) in [(2u64, 2u64, 2u64), (8, 3, 3), (32768, 4, 4), (7, 5, 2)] {
            assert_eq!(exact_u64(&ramsey_upper_bound_u64(f, g, n).unwrap()), n);
        }
    }

    #[test]
    fn single_color_is_free() {
        assert_eq!(exact_u64(&ramsey_upper_bound_u64(1, 2, 9).unwrap()), 9);
    }

    #[test]
    fn pair_coloring_bound_covers_the_classical_value() {
        let b = ramsey_upper_bound_u64(2, 2, 3).unwrap();
        assert_eq!(exact_u64(&b), 16);
        assert!(exact_u64(&b) >= 6);
    }

    #[test]
    fn monotone_in_colors_and_target() {
        let mut prev = BigUint::from(0u32);
        for n in 2..7u64 {
            let v = ramsey_upper_bound_u64(2, 2, n).unwrap();
            let v = v.as_exact().unwrap().clone();
            assert!(v >= prev);
            prev = v;
        }
        for f in 1..5u64 {
            let a = ramsey_upper_bound_u64(f, 2, 4).unwrap();
            let b = ramsey_upper_bound_u64(f + 1, 2, 4).unwrap();
            assert!(a.as_exact().unwrap() <= b.as_exact().unwrap());
        }
        for f in 1..4u64 {
            let a = ramsey_upper_bound_u64(f, 3, 4).unwrap();
            let b = ramsey_upper_bound_u64(f + 1, 3, 4).unwrap();
            assert!(a.min_bits() <= b.min_bits() || a.as_exact().is_some());
            if let (Some(x), Some(y)) = (a.as_exact(), b.as_exact()) {
                assert!(x <= y);
            }
        }
    }

    #[test]
    fn stage_targets_follow_the_split_arithmetic() {
        let one = BigBound::from_u64(1);
        let args = pinned_stage_rho(&one, &one, &one);
        assert_eq!(exact_u64(&args.target), 5); // max(3 + 2, 1)
        assert_eq!(exact_u64(&args.colors), 8);
        assert_eq!(args.arity, 3);

        let args = interior_stage_rho(&BigBound::from_u64(2), &BigBound::from_u64(9));
        assert_eq!(exact_u64(&args.target), 9); // max(8, 9)
        assert_eq!(exact_u64(&args.colors), 1 << 15);
        assert_eq!(args.arity, 4);
    }

    #[test]
    fn chain_records_touch_set_cap() {
        let chain = bound_chain(3, 4, 3).unwrap();
        assert_eq!(chain.touch_set_cap, 6);
        let chain = bound_chain(1, 4, 3).unwrap();
        assert_eq!(chain.touch_set_cap, 4);
        let chain = bound_chain(0, 2, 2).unwrap();
        assert_eq!(chain.touch_set_cap, 3);
    }

    #[test]
    fn tiny_interior_stage_is_exact() {
        // target max(4, 1) = 4 equals the arity, so the bound is 4.
        let b = interior_stage_bound(&BigBound::from_u64(1), &BigBound::from_u64(1)).unwrap();
        assert_eq!(exact_u64(&b), 4);
    }

    #[test]
    fn deep_values_go_symbolic_and_order_against_exact() {
        let b = pinned_stage_bound(
            &BigBound::from_u64(1),
            &BigBound::from_u64(1),
            &BigBound::from_u64(1),
        )
        .unwrap();
        // rho(8, 3, 5) is far beyond the cap.
        assert!(!b.is_exact());
        assert!(b.min_bits() >= BOUND_BIT_CAP);
        let small = BigBound::from_u64(123456);
        assert_eq!(b.max(&small), b);
    }

    #[test]
    fn touching_count_exact_for_t_one() {
        // target 2 equals the arity.
        let b = touching_count_bound(3, 1).unwrap();
        assert_eq!(exact_u64(&b), 2);
    }

    #[test]
    fn serde_round_trip() {
        let vals = [
            BigBound::from_u64(42),
            two_pow(100),
            BigBound::Huge { expr: "rho(8, 3, 5)".into(), min_bits: BOUND_BIT_CAP },
        ];
        for v in &vals {
            let json = serde_json::to_string(v).unwrap();
            let back: BigBound = serde_json::from_str(&json).unwrap();
            assert_eq!(v, &back);
        }
        let json = serde_json::to_string(&BigBound::from_u64(7)).unwrap();
        assert!(json.contains("\"value\":\"7\""));
    }

    #[test]
    fn display_marks_unprintable_exact_values() {
        let big = two_pow(100_000);
        let shown = big.to_string();
        assert!(shown.contains("exceeds print threshold"));
        assert!(big.is_exact());
    }
}
