//! Binary operations on the unit interval: the built-in t-norm zoo,
//! ordinal sums, and finite-evidence probes for continuity class and
//! conditional cancellativity.
//!
//! Evaluation exists twice: exactly on rationals (`eval`) and on `f64`
//! (`eval_f64`) for sampling engines. Both start with the same unit and
//! case analysis, so code paths that must agree call the same variant.

use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::unit::{q, q_max, q_min, q_one, q_zero, Q, UnitValue};

/// Inner operation of an ordinal-sum summand. Per the classical
/// representation theorem only these two (up to isomorphism) occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerTnorm {
    Product,
    Lukasiewicz,
}

/// One ordinal-sum summand: the inner t-norm rescaled onto `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub lo: UnitValue,
    pub hi: UnitValue,
    pub inner: InnerTnorm,
}

/// Analytic continuity class, declared per kind at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityClass {
    Continuous,
    RightContinuous,
    LeftContinuous,
    Neither,
}

/// Verdict of the finite-evidence continuity probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityVerdict {
    Continuous,
    RightContinuousOnly,
    LeftContinuousOnly,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TnormKind {
    Minimum,
    Product,
    Lukasiewicz,
    Drastic,
    NilpotentMinimum,
    OrdinalSum,
}

impl TnormKind {
    pub fn name(&self) -> &'static str {
        match self {
            TnormKind::Minimum => "minimum",
            TnormKind::Product => "product",
            TnormKind::Lukasiewicz => "lukasiewicz",
            TnormKind::Drastic => "drastic",
            TnormKind::NilpotentMinimum => "nilpotent_minimum",
            TnormKind::OrdinalSum => "ordinal_sum",
        }
    }
}

/// Descriptor of a binary operation on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TnormSpec {
    kind: TnormKind,
    summands: Vec<Summand>,
    declared_class: ContinuityClass,
}

impl TnormSpec {
    pub fn minimum() -> Self {
        Self::builtin(TnormKind::Minimum)
    }

    pub fn product() -> Self {
        Self::builtin(TnormKind::Product)
    }

    pub fn lukasiewicz() -> Self {
        Self::builtin(TnormKind::Lukasiewicz)
    }

    pub fn drastic() -> Self {
        Self::builtin(TnormKind::Drastic)
    }

    pub fn nilpotent_minimum() -> Self {
        Self::builtin(TnormKind::NilpotentMinimum)
    }

    fn builtin(kind: TnormKind) -> Self {
        let declared_class = match kind {
            TnormKind::Minimum
            | TnormKind::Product
            | TnormKind::Lukasiewicz
            | TnormKind::OrdinalSum => ContinuityClass::Continuous,
            TnormKind::Drastic => ContinuityClass::RightContinuous,
            TnormKind::NilpotentMinimum => ContinuityClass::LeftContinuous,
        };
        TnormSpec {
            kind,
            summands: Vec::new(),
            declared_class,
        }
    }

    /// Assembles an ordinal sum from summands on pairwise disjoint open
    /// subintervals. The empty list degenerates to the minimum t-norm.
    pub fn ordinal_sum(summands: Vec<Summand>) -> Result<Self> {
        if summands.is_empty() {
            return Ok(Self::minimum());
        }
        let mut sorted = summands;
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        for s in &sorted {
            if s.lo >= s.hi {
                return Err(Error::DegenerateSummand(s.lo.to_f64(), s.hi.to_f64()));
            }
        }
        for w in sorted.windows(2) {
            // Sorted by lo; open intervals intersect iff the earlier one
            // reaches past the start of the later one.
            if w[0].hi > w[1].lo {
                return Err(Error::OverlappingSummands(
                    w[0].lo.to_f64(),
                    w[0].hi.to_f64(),
                    w[1].lo.to_f64(),
                    w[1].hi.to_f64(),
                ));
            }
        }
        Ok(TnormSpec {
            kind: TnormKind::OrdinalSum,
            summands: sorted,
            declared_class: ContinuityClass::Continuous,
        })
    }

    pub fn kind(&self) -> TnormKind {
        self.kind
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn declared_class(&self) -> ContinuityClass {
        self.declared_class
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn is_continuous(&self) -> bool {
        self.declared_class == ContinuityClass::Continuous
    }

    pub fn is_right_continuous(&self) -> bool {
        matches!(
            self.declared_class,
            ContinuityClass::Continuous | ContinuityClass::RightContinuous
        )
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &UnitValue, y: &UnitValue) -> UnitValue {
        UnitValue::new(self.eval_q(x.as_q(), y.as_q())).expect("t-norms are closed on [0,1]")
    }

    /// Exact evaluation on raw rationals in `[0, 1]`.
    pub fn eval_q(&self, x: &Q, y: &Q) -> Q {
        let one = q_one();
        // Unit behaviour first: keeps T4 exact for every kind.
        if x == &one {
            return y.clone();
        }
        if y == &one {
            return x.clone();
        }
        match self.kind {
            TnormKind::Minimum => q_min(x, y),
            TnormKind::Product => x * y,
            TnormKind::Lukasiewicz => {
                let s = x + y - one;
                q_max(&s, &q_zero())
            }
            // max(x, y) = 1 was handled by the unit guard.
            TnormKind::Drastic => q_zero(),
            TnormKind::NilpotentMinimum => {
                if x + y > one {
                    q_min(x, y)
                } else {
                    q_zero()
                }
            }
            TnormKind::OrdinalSum => {
                for s in &self.summands {
                    let (lo, hi) = (s.lo.as_q(), s.hi.as_q());
                    if x >= lo && x <= hi && y >= lo && y <= hi {
                        let w = hi - lo;
                        let fx = (x - lo) / &w;
                        let fy = (y - lo) / &w;
                        let inner = match s.inner {
                            InnerTnorm::Product => &fx * &fy,
                            InnerTnorm::Lukasiewicz => {
                                let t = &fx + &fy - q_one();
                                q_max(&t, &q_zero())
                            }
                        };
                        return lo + w * inner;
                    }
                }
                q_min(x, y)
            }
        }
    }

    /// `f64` evaluation for sampling engines. Mirrors `eval_q` case by
    /// case; the two agree exactly on dyadic inputs for minimum,
    /// Łukasiewicz, drastic and nilpotent minimum, and to within rounding
    /// for product and ordinal sums.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        if x == 1.0 {
            return y;
        }
        if y == 1.0 {
            return x;
        }
        match self.kind {
            TnormKind::Minimum => x.min(y),
            TnormKind::Product => x * y,
            TnormKind::Lukasiewicz => (x + y - 1.0).max(0.0),
            TnormKind::Drastic => 0.0,
            TnormKind::NilpotentMinimum => {
                if x + y > 1.0 {
                    x.min(y)
                } else {
                    0.0
                }
            }
            TnormKind::OrdinalSum => {
                for s in &self.summands {
                    let (lo, hi) = (s.lo.to_f64(), s.hi.to_f64());
                    if x >= lo && x <= hi && y >= lo && y <= hi {
                        let w = hi - lo;
                        let fx = (x - lo) / w;
                        let fy = (y - lo) / w;
                        let inner = match s.inner {
                            InnerTnorm::Product => fx * fy,
                            InnerTnorm::Lukasiewicz => (fx + fy - 1.0).max(0.0),
                        };
                        return lo + w * inner;
                    }
                }
                x.min(y)
            }
        }
    }

    /// Classifies continuity by probing sections `x * (-)` along short
    /// monotone sequences approaching each grid point from either side.
    /// Finite evidence, not a proof; on the built-in zoo it corroborates
    /// `declared_class` for grids of 256 and beyond.
    pub fn probe_continuity(&self, grid_size: usize) -> ContinuityVerdict {
        assert!(grid_size >= 16, "probe grid too coarse");
        // Steps sit far below the zoo's structural scales (grid-aligned
        // lines and summand borders), and the threshold far above the
        // Lipschitz drift a continuous section accumulates over them
        // (section slopes are at most 1). The second, farther step
        // corroborates a suspected jump along a monotone sequence.
        let eps_far = q(1, 1 << 18);
        let eps_near = q(1, 1 << 22);
        let jump = q(1, 1 << 15);
        let g = grid_size as i64;
        let one = q_one();
        let mut right_ok = true;
        let mut left_ok = true;
        for i in 0..=g {
            let x = q(i, g);
            for j in 0..=g {
                let y = q(j, g);
                let v = self.eval_q(&x, &y);
                if right_ok && &y + &eps_far <= one {
                    let lim = self.eval_q(&x, &(&y + &eps_near));
                    if (&lim - &v).abs() > jump {
                        let drift = (self.eval_q(&x, &(&y + &eps_far)) - &lim).abs();
                        if drift <= jump {
                            right_ok = false;
                        }
                    }
                }
                if left_ok && &y - &eps_far >= q_zero() {
                    let lim = self.eval_q(&x, &(&y - &eps_near));
                    if (&lim - &v).abs() > jump {
                        let drift = (self.eval_q(&x, &(&y - &eps_far)) - &lim).abs();
                        if drift <= jump {
                            left_ok = false;
                        }
                    }
                }
                if !right_ok && !left_ok {
                    return ContinuityVerdict::Neither;
                }
            }
        }
        match (right_ok, left_ok) {
            (true, true) => ContinuityVerdict::Continuous,
            (true, false) => ContinuityVerdict::RightContinuousOnly,
            (false, true) => ContinuityVerdict::LeftContinuousOnly,
            (false, false) => ContinuityVerdict::Neither,
        }
    }

    /// Probes conditional cancellativity: `x1 * y = x2 * y > 0` must force
    /// `x1 = x2`. Exact rational equality, so no tolerance is involved.
    pub fn probe_conditional_cancellativity(&self, grid_size: usize) -> CancellativityProbe {
        assert!(grid_size >= 16, "probe grid too coarse");
        let g = grid_size as i64;
        for k in 1..=g {
            let y = q(k, g);
            let mut seen: Option<(i64, Q)> = None;
            for i in 0..=g {
                let x = q(i, g);
                let v = self.eval_q(&x, &y);
                if v > q_zero() {
                    if let Some((i_prev, v_prev)) = &seen {
                        if *v_prev == v {
                            return CancellativityProbe {
                                holds: false,
                                witness: Some(CancellativityWitness {
                                    x1: UnitValue::new(q(*i_prev, g)).unwrap(),
                                    x2: UnitValue::new(x).unwrap(),
                                    y: UnitValue::new(y).unwrap(),
                                }),
                            };
                        }
                    }
                    seen = Some((i, v));
                }
            }
        }
        CancellativityProbe {
            holds: true,
            witness: None,
        }
    }
}

/// Witness of a conditional-cancellativity failure:
/// `x1 * y = x2 * y > 0` with `x1 != x2`.
#[derive(Debug, Clone)]
pub struct CancellativityWitness {
    pub x1: UnitValue,
    pub x2: UnitValue,
    pub y: UnitValue,
}

#[derive(Debug, Clone)]
pub struct CancellativityProbe {
    pub holds: bool,
    pub witness: Option<CancellativityWitness>,
}

// ---------------------------------------------------------------------------
// JSON form: {"kind": "...", "summands": [{"lo": r, "hi": r, "inner": "..."}]}

#[derive(Serialize, Deserialize)]
struct SummandJson {
    lo: f64,
    hi: f64,
    inner: InnerTnorm,
}

#[derive(Serialize, Deserialize)]
struct TnormSpecJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    summands: Vec<SummandJson>,
}

impl Serialize for TnormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TnormSpecJson {
            kind: self.kind.name().to_string(),
            summands: self
                .summands
                .iter()
                .map(|s| SummandJson {
                    lo: s.lo.to_f64(),
                    hi: s.hi.to_f64(),
                    inner: s.inner,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TnormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TnormSpecJson::deserialize(deserializer)?;
        let kind = match raw.kind.as_str() {
            "minimum" | "min" => TnormKind::Minimum,
            "product" => TnormKind::Product,
            "lukasiewicz" => TnormKind::Lukasiewicz,
            "drastic" => TnormKind::Drastic,
            "nilpotent_minimum" => TnormKind::NilpotentMinimum,
            "ordinal_sum" => TnormKind::OrdinalSum,
            other => {
                return Err(D::Error::custom(format!(
                    "invalid field `kind`: unknown t-norm kind `{other}`"
                )))
            }
        };
        if kind != TnormKind::OrdinalSum {
            if !raw.summands.is_empty() {
                return Err(D::Error::custom(format!(
                    "invalid field `summands`: kind `{}` takes none",
                    raw.kind
                )));
            }
            return Ok(TnormSpec::builtin(kind));
        }
        let mut summands = Vec::with_capacity(raw.summands.len());
        for s in raw.summands {
            let lo = UnitValue::from_f64(s.lo)
                .map_err(|e| D::Error::custom(format!("invalid field `summands.lo`: {e}")))?;
            let hi = UnitValue::from_f64(s.hi)
                .map_err(|e| D::Error::custom(format!("invalid field `summands.hi`: {e}")))?;
            summands.push(Summand {
                lo,
                hi,
                inner: s.inner,
            });
        }
        TnormSpec::ordinal_sum(summands)
            .map_err(|e| D::Error::custom(format!("invalid field `summands`: {e}")))
    }
}

/// Parses a builtin kind name, for CLI flags.
impl std::str::FromStr for TnormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimum" | "min" => Ok(TnormSpec::minimum()),
            "product" => Ok(TnormSpec::product()),
            "lukasiewicz" | "luk" => Ok(TnormSpec::lukasiewicz()),
            "drastic" => Ok(TnormSpec::drastic()),
            "nilpotent_minimum" | "nilpotent-minimum" => Ok(TnormSpec::nilpotent_minimum()),
            other => Err(Error::invalid_field(
                "kind",
                format!("unknown t-norm kind `{other}` (ordinal sums require a JSON spec)"),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(num: i64, den: i64) -> UnitValue {
        UnitValue::from_ratio(num, den).unwrap()
    }

    #[test]
    fn lukasiewicz_matches_closed_form() {
        // max{x + y - 1, 0} at (0.7, 0.6) is exactly 0.3 in rationals.
        let t = TnormSpec::lukasiewicz();
        assert_eq!(t.eval(&u(7, 10), &u(6, 10)), u(3, 10));
        assert_eq!(t.eval(&u(1, 4), &u(1, 2)), u(0, 1));
    }

    #[test]
    fn unit_axiom_is_exact_for_every_kind() {
        let zoo = [
            TnormSpec::minimum(),
            TnormSpec::product(),
            TnormSpec::lukasiewicz(),
            TnormSpec::drastic(),
            TnormSpec::nilpotent_minimum(),
            test_ordinal_sum(),
        ];
        for t in &zoo {
            for i in 0..=32 {
                let x = u(i, 32);
                assert_eq!(t.eval(&x, &UnitValue::one()), x, "{}", t.name());
                assert_eq!(t.eval(&UnitValue::one(), &x), x, "{}", t.name());
            }
        }
    }

    fn test_ordinal_sum() -> TnormSpec {
        TnormSpec::ordinal_sum(vec![
            Summand {
                lo: u(1, 4),
                hi: u(1, 2),
                inner: InnerTnorm::Product,
            },
            Summand {
                lo: u(9, 16),
                hi: u(7, 8),
                inner: InnerTnorm::Lukasiewicz,
            },
        ])
        .unwrap()
    }

    #[test]
    fn ordinal_sum_product_summand_frozen_value() {
        // Summand (0.2, 0.8) with the product inside, at (0.7, 0.7):
        // phi(x) = (x - 1/5) / (3/5), T(0.7, 0.7) = 1/5 + 3/5 * (5/6)^2 = 37/60.
        let t = TnormSpec::ordinal_sum(vec![Summand {
            lo: u(1, 5),
            hi: u(4, 5),
            inner: InnerTnorm::Product,
        }])
        .unwrap();
        assert_eq!(t.eval(&u(7, 10), &u(7, 10)), u(37, 60));
        // Outside the summand square: plain minimum.
        assert_eq!(t.eval(&u(1, 10), &u(9, 10)), u(1, 10));
        assert_eq!(t.eval(&u(7, 10), &u(9, 10)), u(7, 10));
    }

    #[test]
    fn ordinal_sum_lukasiewicz_summand_hits_zero() {
        // Summand (0, 1/2): phi(x) = 2x, T_L(1/2, 1/2) = 0, phi^{-1}(0) = 0.
        let t = TnormSpec::ordinal_sum(vec![Summand {
            lo: u(0, 1),
            hi: u(1, 2),
            inner: InnerTnorm::Lukasiewicz,
        }])
        .unwrap();
        assert_eq!(t.eval(&u(1, 4), &u(1, 4)), UnitValue::zero());
    }

    #[test]
    fn ordinal_sum_identity_isomorphism_equals_product() {
        let t = TnormSpec::ordinal_sum(vec![Summand {
            lo: u(0, 1),
            hi: u(1, 1),
            inner: InnerTnorm::Product,
        }])
        .unwrap();
        let p = TnormSpec::product();
        for i in 0..=16 {
            for j in 0..=16 {
                let (x, y) = (u(i, 16), u(j, 16));
                assert_eq!(t.eval(&x, &y), p.eval(&x, &y));
            }
        }
    }

    #[test]
    fn empty_ordinal_sum_is_minimum() {
        let t = TnormSpec::ordinal_sum(vec![]).unwrap();
        assert_eq!(t.kind(), TnormKind::Minimum);
    }

    #[test]
    fn ordinal_sum_rejects_bad_summands() {
        let degenerate = TnormSpec::ordinal_sum(vec![Summand {
            lo: u(1, 2),
            hi: u(1, 2),
            inner: InnerTnorm::Product,
        }]);
        assert!(matches!(degenerate, Err(Error::DegenerateSummand(..))));

        let overlapping = TnormSpec::ordinal_sum(vec![
            Summand {
                lo: u(1, 4),
                hi: u(3, 4),
                inner: InnerTnorm::Product,
            },
            Summand {
                lo: u(1, 2),
                hi: u(7, 8),
                inner: InnerTnorm::Lukasiewicz,
            },
        ]);
        assert!(matches!(overlapping, Err(Error::OverlappingSummands(..))));
        // Touching at a shared endpoint stays disjoint as open intervals.
        let touching = TnormSpec::ordinal_sum(vec![
            Summand {
                lo: u(1, 4),
                hi: u(1, 2),
                inner: InnerTnorm::Product,
            },
            Summand {
                lo: u(1, 2),
                hi: u(3, 4),
                inner: InnerTnorm::Lukasiewicz,
            },
        ]);
        assert!(touching.is_ok());
    }

    #[test]
    fn axioms_hold_on_grid() {
        // T1-T4 on all grid pairs, associativity on all grid triples.
        let zoo = [
            TnormSpec::minimum(),
            TnormSpec::product(),
            TnormSpec::lukasiewicz(),
            TnormSpec::drastic(),
            TnormSpec::nilpotent_minimum(),
            test_ordinal_sum(),
        ];
        let g = 12i64;
        for t in &zoo {
            for i in 0..=g {
                for j in 0..=g {
                    let (x, y) = (q(i, g), q(j, g));
                    let xy = t.eval_q(&x, &y);
                    assert_eq!(xy, t.eval_q(&y, &x), "T1 {}", t.name());
                    assert!(xy >= q_zero() && xy <= q_one());
                    for k in 0..=g {
                        let z = q(k, g);
                        // T3 in the second argument (j <= k).
                        if j <= k {
                            assert!(
                                t.eval_q(&x, &y) <= t.eval_q(&x, &z),
                                "T3 {} at ({i},{j},{k})",
                                t.name()
                            );
                        }
                        assert_eq!(
                            t.eval_q(&xy, &z),
                            t.eval_q(&x, &t.eval_q(&y, &z)),
                            "T2 {} at ({i},{j},{k})",
                            t.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn continuity_probe_matches_declared_class() {
        let cases = [
            (TnormSpec::minimum(), ContinuityVerdict::Continuous),
            (TnormSpec::product(), ContinuityVerdict::Continuous),
            (TnormSpec::lukasiewicz(), ContinuityVerdict::Continuous),
            (TnormSpec::drastic(), ContinuityVerdict::RightContinuousOnly),
            (
                TnormSpec::nilpotent_minimum(),
                ContinuityVerdict::LeftContinuousOnly,
            ),
            (test_ordinal_sum(), ContinuityVerdict::Continuous),
        ];
        for (t, expected) in cases {
            assert_eq!(t.probe_continuity(32), expected, "{}", t.name());
        }
    }

    #[test]
    fn cancellativity_probe() {
        assert!(TnormSpec::product().probe_conditional_cancellativity(20).holds);
        assert!(TnormSpec::lukasiewicz().probe_conditional_cancellativity(20).holds);
        let min = TnormSpec::minimum().probe_conditional_cancellativity(20);
        assert!(!min.holds);
        let w = min.witness.unwrap();
        // Both give min(x1, y) = min(x2, y) = y > 0 with x1 != x2.
        assert!(w.x1 != w.x2);
        let t = TnormSpec::minimum();
        assert_eq!(t.eval(&w.x1, &w.y), t.eval(&w.x2, &w.y));
    }

    #[test]
    fn minimum_cancellativity_example() {
        // x1 = 0.4, x2 = 0.6, y = 0.3: both minima are 0.3 > 0.
        let t = TnormSpec::minimum();
        let v1 = t.eval(&u(2, 5), &u(3, 10));
        let v2 = t.eval(&u(3, 5), &u(3, 10));
        assert_eq!(v1, v2);
        assert_eq!(v1, u(3, 10));
    }

    #[test]
    fn json_round_trip_and_unknown_kind() {
        let t = test_ordinal_sum();
        let j = serde_json::to_string(&t).unwrap();
        let back: TnormSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(t, back);

        let err = serde_json::from_str::<TnormSpec>(r#"{"kind": "frobnicate"}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("kind"), "error should name the field: {err}");
    }
}
