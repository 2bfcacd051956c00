//! Closed-interval algebra: interval images under continuous t-norms, the
//! componentwise order, and nested cut families as the computational avatar
//! of normal convex usc truth values.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tnorm::TnormSpec;
use crate::truth::TruthValue;
use crate::unit::{q, q_min, q_one, Q, UnitValue};

/// Nonempty closed subinterval of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: UnitValue,
    hi: UnitValue,
}

impl Interval {
    pub fn new(lo: UnitValue, hi: UnitValue) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid_field(
                "lo",
                format!("interval needs lo <= hi, got ({lo}, {hi})"),
            ));
        }
        Ok(Interval { lo, hi })
    }

    pub fn singleton(x: UnitValue) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &UnitValue {
        &self.lo
    }

    pub fn hi(&self) -> &UnitValue {
        &self.hi
    }

    /// Minimum combination `{x /\ y | x in A, y in B}`, itself an interval.
    pub fn meet(&self, other: &Interval) -> Interval {
        Interval {
            lo: UnitValue::new(q_min(self.lo.as_q(), other.lo.as_q())).unwrap(),
            hi: UnitValue::new(q_min(self.hi.as_q(), other.hi.as_q())).unwrap(),
        }
    }

    /// The interval order: `A <= B` iff `A /\ B = A`, which for closed
    /// intervals is the componentwise comparison of endpoints.
    pub fn leq(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    /// Exact image `{a * b | a in A, b in B}` under a continuous t-norm;
    /// monotonicity and continuity make it `[lo * lo, hi * hi]`.
    pub fn image(&self, other: &Interval, star: &TnormSpec) -> Result<Interval> {
        if !star.is_continuous() {
            return Err(Error::NotContinuous(star.name().to_string()));
        }
        Ok(Interval {
            lo: star.eval(&self.lo, &other.lo),
            hi: star.eval(&self.hi, &other.hi),
        })
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        self.lo.as_q() <= x && x <= self.hi.as_q()
    }

    /// Set inclusion `self` within `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// Nested closed cuts indexed by an ascending alpha grid ending at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutFamily {
    alpha_grid: Vec<UnitValue>,
    cuts: Vec<Interval>,
}

impl CutFamily {
    pub fn new(alpha_grid: Vec<UnitValue>, cuts: Vec<Interval>) -> Result<Self> {
        validate_grid(&alpha_grid)?;
        if cuts.len() != alpha_grid.len() {
            return Err(Error::invalid_field(
                "cuts",
                "length must equal |alpha_grid|",
            ));
        }
        for i in 1..cuts.len() {
            if !cuts[i].subset_of(&cuts[i - 1]) {
                return Err(Error::NotNested(i));
            }
        }
        Ok(CutFamily { alpha_grid, cuts })
    }

    pub fn alpha_grid(&self) -> &[UnitValue] {
        &self.alpha_grid
    }

    pub fn cuts(&self) -> &[Interval] {
        &self.cuts
    }

    pub fn levels(&self) -> usize {
        self.alpha_grid.len()
    }

    pub fn same_grid(&self, other: &CutFamily) -> bool {
        self.alpha_grid == other.alpha_grid
    }

    /// The default grid: `m` uniform levels `i/m`, `i = 1..=m`.
    pub fn uniform_grid(m: usize) -> Vec<UnitValue> {
        assert!(m >= 1);
        (1..=m)
            .map(|i| UnitValue::new(q(i as i64, m as i64)).unwrap())
            .collect()
    }

    /// Exact cuts of a normal convex usc truth value at the grid levels.
    pub fn cuts_of(f: &TruthValue, alpha_grid: &[UnitValue]) -> Result<Self> {
        validate_grid(alpha_grid)?;
        let props = f.properties();
        if !props.all_true() {
            return Err(Error::NotInLu(format!(
                "properties are normal={} convex={} usc={}",
                props.normal, props.convex, props.usc
            )));
        }
        let mut cuts = Vec::with_capacity(alpha_grid.len());
        for alpha in alpha_grid {
            let comps = f.alpha_cut(alpha);
            if comps.len() != 1 || !comps[0].is_closed() {
                return Err(Error::NotInLu(format!(
                    "cut at {} has {} components",
                    alpha,
                    comps.len()
                )));
            }
            cuts.push(Interval {
                lo: UnitValue::new(comps[0].lo.clone()).unwrap(),
                hi: UnitValue::new(comps[0].hi.clone()).unwrap(),
            });
        }
        CutFamily::new(alpha_grid.to_vec(), cuts)
    }

    /// The usc staircase `x -> max{alpha in grid : x in cut(alpha)}` (0 off
    /// every cut), inverse of `cuts_of` up to grid resolution and exactly on
    /// the round trip.
    pub fn to_tv(&self) -> TruthValue {
        let mut xs: Vec<Q> = vec![Q::from_integer(0.into()), q_one()];
        for c in &self.cuts {
            xs.push(c.lo.as_q().clone());
            xs.push(c.hi.as_q().clone());
        }
        xs.sort();
        xs.dedup();
        let level_at = |x: &Q| -> Q {
            // Nesting makes the covering levels a prefix of the index
            // range: los ascend and his descend, so both bounds binary
            // search. The deepest covering level is their meet.
            let t_lo = self.cuts.partition_point(|c| c.lo.as_q() <= x);
            let t_hi = self.cuts.partition_point(|c| c.hi.as_q() >= x);
            let t = t_lo.min(t_hi);
            if t == 0 {
                Q::from_integer(0.into())
            } else {
                self.alpha_grid[t - 1].as_q().clone()
            }
        };
        let pv: Vec<Q> = xs.iter().map(&level_at).collect();
        let two = Q::from_integer(2.into());
        let segs: Vec<crate::truth::Segment> = xs
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                let v = level_at(&mid);
                crate::truth::Segment {
                    left_val: v.clone(),
                    right_val: v,
                }
            })
            .collect();
        TruthValue::new(xs, pv, segs)
            .expect("staircase from valid cuts is valid")
            .canonical()
    }
}

fn validate_grid(grid: &[UnitValue]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid_field("alpha_grid", "must be nonempty"));
    }
    if grid.iter().any(|a| a.is_zero()) {
        return Err(Error::invalid_field(
            "alpha_grid",
            "levels must lie in (0, 1]",
        ));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid_field(
            "alpha_grid",
            "levels must be strictly increasing",
        ));
    }
    if !grid.last().unwrap().is_one() {
        return Err(Error::invalid_field("alpha_grid", "must end at 1"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON forms.

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    lo: f64,
    hi: f64,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalJson {
            lo: self.lo.to_f64(),
            hi: self.hi.to_f64(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = IntervalJson::deserialize(deserializer)?;
        let lo = UnitValue::from_f64(raw.lo)
            .map_err(|e| D::Error::custom(format!("invalid field `lo`: {e}")))?;
        let hi = UnitValue::from_f64(raw.hi)
            .map_err(|e| D::Error::custom(format!("invalid field `hi`: {e}")))?;
        Interval::new(lo, hi).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct CutFamilyJson {
    alpha_grid: Vec<f64>,
    cuts: Vec<IntervalJson>,
}

impl Serialize for CutFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CutFamilyJson {
            alpha_grid: self.alpha_grid.iter().map(|a| a.to_f64()).collect(),
            cuts: self
                .cuts
                .iter()
                .map(|c| IntervalJson {
                    lo: c.lo.to_f64(),
                    hi: c.hi.to_f64(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CutFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CutFamilyJson::deserialize(deserializer)?;
        let grid = raw
            .alpha_grid
            .into_iter()
            .map(|a| {
                UnitValue::from_f64(a)
                    .map_err(|e| D::Error::custom(format!("invalid field `alpha_grid`: {e}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let cuts = raw
            .cuts
            .into_iter()
            .map(|c| {
                let lo = UnitValue::from_f64(c.lo)
                    .map_err(|e| D::Error::custom(format!("invalid field `cuts.lo`: {e}")))?;
                let hi = UnitValue::from_f64(c.hi)
                    .map_err(|e| D::Error::custom(format!("invalid field `cuts.hi`: {e}")))?;
                Interval::new(lo, hi).map_err(D::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CutFamily::new(grid, cuts).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::{q_to_f64, q_zero};

    fn u(num: i64, den: i64) -> UnitValue {
        UnitValue::from_ratio(num, den).unwrap()
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(u(a.0, a.1), u(b.0, b.1)).unwrap()
    }

    #[test]
    fn image_under_product_frozen_against_grid_search() {
        // [0.2, 0.5] x [0.4, 1.0] under the product: brute-force the image
        // over a 1000^2 grid and compare the exact endpoints.
        let a = iv((1, 5), (1, 2));
        let b = iv((2, 5), (1, 1));
        let img = a.image(&b, &TnormSpec::product()).unwrap();
        assert_eq!(img.lo(), &u(2, 25));
        assert_eq!(img.hi(), &u(1, 2));

        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (alo, ahi) = (0.2, 0.5);
        let (blo, bhi) = (0.4, 1.0);
        for i in 0..=1000 {
            for j in 0..=1000 {
                let x = alo + (ahi - alo) * i as f64 / 1000.0;
                let y = blo + (bhi - blo) * j as f64 / 1000.0;
                min = min.min(x * y);
                max = max.max(x * y);
            }
        }
        assert!((min - img.lo().to_f64()).abs() < 1e-9);
        assert!((max - img.hi().to_f64()).abs() < 1e-9);
    }

    #[test]
    fn image_unit_and_boundary_laws() {
        let a = iv((3, 10), (7, 10));
        let unit = Interval::singleton(UnitValue::one());
        for star in [
            TnormSpec::minimum(),
            TnormSpec::product(),
            TnormSpec::lukasiewicz(),
        ] {
            let img = a.image(&unit, &star).unwrap();
            assert_eq!(&img, &a);
        }
        // [0,1] * [a,b] = [0,b] under the minimum.
        let full = iv((0, 1), (1, 1));
        let img = full.image(&iv((1, 4), (3, 5)), &TnormSpec::minimum()).unwrap();
        assert_eq!(img.lo(), &UnitValue::zero());
        assert_eq!(img.hi(), &u(3, 5));
    }

    #[test]
    fn image_requires_continuity() {
        let a = iv((1, 4), (1, 2));
        assert!(matches!(
            a.image(&a, &TnormSpec::drastic()),
            Err(Error::NotContinuous(_))
        ));
    }

    #[test]
    fn leq_matches_definitional_meet() {
        let cases = [
            (iv((1, 5), (1, 2)), iv((3, 10), (3, 5)), true),
            (iv((1, 5), (7, 10)), iv((3, 10), (3, 5)), false),
            (iv((1, 4), (1, 2)), iv((1, 4), (1, 2)), true),
        ];
        for (a, b, expect) in cases {
            assert_eq!(a.leq(&b), expect);
            assert_eq!(a.meet(&b) == a, expect);
        }
    }

    #[test]
    fn cuts_of_triangle_on_two_levels() {
        let f = TruthValue::triangle_tv(&UnitValue::zero(), &u(1, 2), &UnitValue::one()).unwrap();
        let grid = vec![u(1, 2), UnitValue::one()];
        let fam = CutFamily::cuts_of(&f, &grid).unwrap();
        assert_eq!(fam.cuts()[0], iv((1, 4), (3, 4)));
        assert_eq!(fam.cuts()[1], iv((1, 2), (1, 2)));
    }

    #[test]
    fn cuts_of_interval_is_constant_family() {
        let f = TruthValue::interval_tv(&u(1, 4), &u(5, 8)).unwrap();
        let fam = CutFamily::cuts_of(&f, &CutFamily::uniform_grid(7)).unwrap();
        for c in fam.cuts() {
            assert_eq!(c, &iv((1, 4), (5, 8)));
        }
    }

    #[test]
    fn cuts_of_rejects_non_lu() {
        let f = TruthValue::new(
            vec![q_zero(), q(1, 2), q_one()],
            vec![q_one(), q_zero(), q_one()],
            vec![
                crate::truth::Segment {
                    left_val: q_zero(),
                    right_val: q_zero(),
                },
                crate::truth::Segment {
                    left_val: q_zero(),
                    right_val: q_zero(),
                },
            ],
        )
        .unwrap();
        assert!(matches!(
            CutFamily::cuts_of(&f, &CutFamily::uniform_grid(4)),
            Err(Error::NotInLu(_))
        ));
    }

    #[test]
    fn tv_from_cuts_round_trips_exactly() {
        let grid = CutFamily::uniform_grid(16);
        let cuts: Vec<Interval> = (0..16)
            .map(|t| iv((t, 64), (40 - t, 64)))
            .collect();
        let fam = CutFamily::new(grid.clone(), cuts).unwrap();
        let tv = fam.to_tv();
        assert!(tv.properties().all_true());
        let back = CutFamily::cuts_of(&tv, &grid).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn tv_from_cuts_special_cases() {
        // Constant family -> interval characteristic.
        let grid = CutFamily::uniform_grid(5);
        let fam =
            CutFamily::new(grid, vec![iv((1, 4), (3, 4)); 5]).unwrap();
        assert!(fam
            .to_tv()
            .fn_eq(&TruthValue::interval_tv(&u(1, 4), &u(3, 4)).unwrap()));

        // Single level {1} with a singleton cut -> point characteristic.
        let fam = CutFamily::new(
            vec![UnitValue::one()],
            vec![Interval::singleton(u(2, 5))],
        )
        .unwrap();
        assert!(fam.to_tv().fn_eq(&TruthValue::point_tv(&u(2, 5))));
    }

    #[test]
    fn staircase_tracks_triangle_within_grid_resolution() {
        let f = TruthValue::triangle_tv(&UnitValue::zero(), &u(1, 2), &UnitValue::one()).unwrap();
        let grid = CutFamily::uniform_grid(64);
        let stair = CutFamily::cuts_of(&f, &grid).unwrap().to_tv();
        for i in 0..=1000 {
            let x = q(i, 1000);
            let diff = f.eval_q(&x) - stair.eval_q(&x);
            assert!(diff >= q_zero() && diff <= q(1, 64), "at {}", q_to_f64(&x));
        }
    }

    #[test]
    fn nesting_is_enforced() {
        let grid = CutFamily::uniform_grid(2);
        let bad = CutFamily::new(grid, vec![iv((1, 2), (3, 4)), iv((1, 4), (3, 4))]);
        assert!(matches!(bad, Err(Error::NotNested(1))));
    }

    #[test]
    fn json_round_trip() {
        let f = TruthValue::triangle_tv(&u(1, 8), &u(1, 2), &u(7, 8)).unwrap();
        let fam = CutFamily::cuts_of(&f, &CutFamily::uniform_grid(8)).unwrap();
        let s = serde_json::to_string(&fam).unwrap();
        let back: CutFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(fam, back);
    }
}
