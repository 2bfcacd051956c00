//! Fuzzy truth values as exact piecewise-affine functions `[0,1] -> [0,1]`
//! with jumps at breakpoints.
//!
//! The representation keeps the value AT each breakpoint separately from the
//! one-sided limits of the adjacent open segments, which is exactly enough to
//! express characteristic functions, the step-plus-ramp constructions used in
//! counterexamples, and every staircase reconstructed from a cut family —
//! while keeping normality, convexity, upper semicontinuity and cut
//! extraction decidable exactly.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::unit::{q_max, q_min, q_one, q_to_f64, q_zero, Q, UnitValue};

/// Affine piece on an open interval, described by its one-sided limits:
/// `left_val` approaching the left endpoint from inside, `right_val`
/// approaching the right endpoint from inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub left_val: Q,
    pub right_val: Q,
}

impl Segment {
    fn constant(v: Q) -> Self {
        Segment {
            left_val: v.clone(),
            right_val: v,
        }
    }
}

/// Exact piecewise-affine function with jumps; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthValue {
    breakpoints: Vec<Q>,
    point_values: Vec<Q>,
    segments: Vec<Segment>,
}

/// Outcome of the normal/convex/usc predicates.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub normal: bool,
    pub convex: bool,
    pub usc: bool,
    pub attains_one: bool,
    /// A point witnessing the first failed property, when one has a
    /// meaningful location (usc and convexity failures do).
    pub witness: Option<UnitValue>,
}

impl PropertyReport {
    pub fn all_true(&self) -> bool {
        self.normal && self.convex && self.usc && self.attains_one
    }
}

/// One maximal connected component of a level set, with closure flags
/// per endpoint. For usc inputs every component of a (non-strict) cut
/// is closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutComponent {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl CutComponent {
    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }
}

enum Bound {
    Unbounded,
    Val(Q),
}

impl Bound {
    fn fold(&mut self, v: &Q) {
        match self {
            Bound::Unbounded => *self = Bound::Val(v.clone()),
            Bound::Val(cur) => {
                if v > cur {
                    *cur = v.clone();
                }
            }
        }
    }

    fn gt(&self, v: &Q) -> bool {
        match self {
            Bound::Unbounded => false,
            Bound::Val(cur) => cur > v,
        }
    }

    fn get(&self) -> Option<&Q> {
        match self {
            Bound::Unbounded => None,
            Bound::Val(v) => Some(v),
        }
    }
}

impl TruthValue {
    /// Validates and assembles a truth value.
    ///
    /// Requirements: breakpoints strictly increasing from 0 to 1, one value
    /// per breakpoint, one segment per gap, and every value and limit in
    /// `[0, 1]`.
    pub fn new(breakpoints: Vec<Q>, point_values: Vec<Q>, segments: Vec<Segment>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid_field(
                "breakpoints",
                "need at least the two endpoints 0 and 1",
            ));
        }
        if breakpoints[0] != q_zero() {
            return Err(Error::invalid_field("breakpoints", "must start at 0"));
        }
        if *breakpoints.last().unwrap() != q_one() {
            return Err(Error::invalid_field("breakpoints", "must end at 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid_field(
                "breakpoints",
                "must be strictly increasing",
            ));
        }
        if point_values.len() != breakpoints.len() {
            return Err(Error::invalid_field(
                "point_values",
                "length must equal |breakpoints|",
            ));
        }
        if segments.len() + 1 != breakpoints.len() {
            return Err(Error::invalid_field(
                "segments",
                "length must equal |breakpoints| - 1",
            ));
        }
        let in_range = |v: &Q| *v >= q_zero() && *v <= q_one();
        if !point_values.iter().all(in_range) {
            return Err(Error::invalid_field("point_values", "outside [0, 1]"));
        }
        if !segments
            .iter()
            .all(|s| in_range(&s.left_val) && in_range(&s.right_val))
        {
            return Err(Error::invalid_field("segments", "limit outside [0, 1]"));
        }
        Ok(TruthValue {
            breakpoints,
            point_values,
            segments,
        })
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn point_values(&self) -> &[Q] {
        &self.point_values
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    // -- constructors -------------------------------------------------------

    /// Characteristic function of the singleton `{x}`.
    pub fn point_tv(x: &UnitValue) -> Self {
        Self::interval_char(x.as_q(), x.as_q())
    }

    /// Characteristic function of the closed interval `[a, b]`.
    pub fn interval_tv(a: &UnitValue, b: &UnitValue) -> Result<Self> {
        if a > b {
            return Err(Error::BadShape(format!(
                "interval_tv needs a <= b, got ({}, {})",
                a, b
            )));
        }
        Ok(Self::interval_char(a.as_q(), b.as_q()))
    }

    fn interval_char(a: &Q, b: &Q) -> Self {
        let zero = q_zero();
        let one = q_one();
        let mut bps = vec![zero.clone()];
        for x in [a, b, &one] {
            if x > bps.last().unwrap() {
                bps.push(x.clone());
            }
        }
        let pv: Vec<Q> = bps
            .iter()
            .map(|x| if x >= a && x <= b { one.clone() } else { zero.clone() })
            .collect();
        let segs: Vec<Segment> = bps
            .windows(2)
            .map(|w| {
                // The open gap is inside [a, b] iff both ends are.
                if &w[0] >= a && &w[1] <= b {
                    Segment::constant(one.clone())
                } else {
                    Segment::constant(zero.clone())
                }
            })
            .collect();
        TruthValue::new(bps, pv, segs).expect("interval characteristic is valid")
    }

    /// Triangular shape: 0 outside `[a, b]`, rising to 1 at the apex `c`.
    /// Degenerate flanks (`a = c` or `c = b`) become vertical jumps, which
    /// keeps the result upper semicontinuous.
    pub fn triangle_tv(a: &UnitValue, c: &UnitValue, b: &UnitValue) -> Result<Self> {
        if !(a <= c && c <= b) {
            return Err(Error::BadShape(format!(
                "triangle_tv needs a <= c <= b, got ({}, {}, {})",
                a, c, b
            )));
        }
        if a == b {
            return Ok(Self::point_tv(a));
        }
        let (a, c, b) = (a.as_q(), c.as_q(), b.as_q());
        let one = q_one();
        let zero = q_zero();
        let rise = |x: &Q| (x - a) / (c - a);
        let fall = |x: &Q| (b - x) / (b - c);
        let value_at = |x: &Q| -> Q {
            if x < a || x > b {
                zero.clone()
            } else if x == c {
                one.clone()
            } else if x < c {
                rise(x)
            } else {
                fall(x)
            }
        };
        let limit_right = |p: &Q| -> Q {
            // Value just right of p; only called for p < 1.
            if p < a || p >= b {
                zero.clone()
            } else if p < c && a < c {
                rise(p)
            } else {
                fall(p)
            }
        };
        let limit_left = |p: &Q| -> Q {
            if p <= a || p > b {
                zero.clone()
            } else if p <= c && a < c {
                rise(p)
            } else {
                fall(p)
            }
        };
        Self::from_profile(&[a, c, b], value_at, limit_right, limit_left)
    }

    /// Trapezoidal shape: 0 outside `[a, d]`, 1 on the plateau `[b, c]`.
    pub fn trapezoid_tv(
        a: &UnitValue,
        b: &UnitValue,
        c: &UnitValue,
        d: &UnitValue,
    ) -> Result<Self> {
        if !(a <= b && b <= c && c <= d) {
            return Err(Error::BadShape(format!(
                "trapezoid_tv needs a <= b <= c <= d, got ({}, {}, {}, {})",
                a, b, c, d
            )));
        }
        if a == d {
            return Ok(Self::point_tv(a));
        }
        let (a, b, c, d) = (a.as_q(), b.as_q(), c.as_q(), d.as_q());
        let one = q_one();
        let zero = q_zero();
        let rise = |x: &Q| (x - a) / (b - a);
        let fall = |x: &Q| (d - x) / (d - c);
        let value_at = |x: &Q| -> Q {
            if x < a || x > d {
                zero.clone()
            } else if x >= b && x <= c {
                one.clone()
            } else if x < b {
                rise(x)
            } else {
                fall(x)
            }
        };
        let limit_right = |p: &Q| -> Q {
            if p < a || p >= d {
                zero.clone()
            } else if p < b && a < b {
                rise(p)
            } else if p < c {
                one.clone()
            } else {
                fall(p)
            }
        };
        let limit_left = |p: &Q| -> Q {
            if p <= a || p > d {
                zero.clone()
            } else if p <= b && a < b {
                rise(p)
            } else if p <= c {
                one.clone()
            } else {
                fall(p)
            }
        };
        Self::from_profile(&[a, b, c, d], value_at, limit_right, limit_left)
    }

    /// Builds from closures describing a shape exactly: knots plus the
    /// domain endpoints become breakpoints; each open gap is affine with
    /// the supplied one-sided limits.
    fn from_profile(
        knots: &[&Q],
        value_at: impl Fn(&Q) -> Q,
        limit_right: impl Fn(&Q) -> Q,
        limit_left: impl Fn(&Q) -> Q,
    ) -> Result<Self> {
        let mut bps: Vec<Q> = vec![q_zero()];
        let mut sorted: Vec<&Q> = knots.to_vec();
        sorted.sort();
        for x in sorted {
            if x > bps.last().unwrap() && *x < q_one() {
                bps.push(x.clone());
            }
        }
        bps.push(q_one());
        let pv: Vec<Q> = bps.iter().map(&value_at).collect();
        let segs: Vec<Segment> = bps
            .windows(2)
            .map(|w| Segment {
                left_val: limit_right(&w[0]),
                right_val: limit_left(&w[1]),
            })
            .collect();
        let tv = TruthValue::new(bps, pv, segs)?;
        Ok(tv.canonical())
    }

    /// Case-1 necessity function `f`: 1 at 0, `a` on `(0, u]`, 0 after.
    pub fn necessity_case1_f(a: &UnitValue, u: &UnitValue) -> Result<Self> {
        check_open_unit("a", a)?;
        check_open_unit("u", u)?;
        let (a, u) = (a.as_q().clone(), u.as_q().clone());
        TruthValue::new(
            vec![q_zero(), u, q_one()],
            vec![q_one(), a.clone(), q_zero()],
            vec![Segment::constant(a), Segment::constant(q_zero())],
        )
    }

    /// Case-1 necessity function `g`: affine from 1 down to `b` on `[0, u]`,
    /// 0 after.
    pub fn necessity_case1_g(b: &UnitValue, u: &UnitValue) -> Result<Self> {
        check_open_unit("b", b)?;
        check_open_unit("u", u)?;
        let (b, u) = (b.as_q().clone(), u.as_q().clone());
        TruthValue::new(
            vec![q_zero(), u, q_one()],
            vec![q_one(), b.clone(), q_zero()],
            vec![
                Segment {
                    left_val: q_one(),
                    right_val: b,
                },
                Segment::constant(q_zero()),
            ],
        )
    }

    /// Case-2 necessity function `f`: 0 on `[0, u)`, `a` on `[u, 1)`, 1 at 1.
    pub fn necessity_case2_f(a: &UnitValue, u: &UnitValue) -> Result<Self> {
        check_open_unit("a", a)?;
        check_open_unit("u", u)?;
        let (a, u) = (a.as_q().clone(), u.as_q().clone());
        TruthValue::new(
            vec![q_zero(), u, q_one()],
            vec![q_zero(), a.clone(), q_one()],
            vec![Segment::constant(q_zero()), Segment::constant(a)],
        )
    }

    /// Case-2 necessity function `g`: 0 on `[0, v)`, affine from `b` up to 1
    /// on `[v, 1]`.
    pub fn necessity_case2_g(b: &UnitValue, v: &UnitValue) -> Result<Self> {
        check_open_unit("b", b)?;
        check_open_unit("v", v)?;
        let (b, v) = (b.as_q().clone(), v.as_q().clone());
        TruthValue::new(
            vec![q_zero(), v, q_one()],
            vec![q_zero(), b.clone(), q_one()],
            vec![
                Segment::constant(q_zero()),
                Segment {
                    left_val: b,
                    right_val: q_one(),
                },
            ],
        )
    }

    // -- evaluation ---------------------------------------------------------

    /// Exact value at `x`.
    pub fn eval_q(&self, x: &Q) -> Q {
        match self.breakpoints.binary_search_by(|b| b.cmp(x)) {
            Ok(i) => self.point_values[i].clone(),
            Err(i) => self.interp(i - 1, x),
        }
    }

    pub fn eval(&self, x: &UnitValue) -> UnitValue {
        UnitValue::new(self.eval_q(x.as_q())).expect("values stay in [0,1]")
    }

    fn interp(&self, seg: usize, x: &Q) -> Q {
        let xa = &self.breakpoints[seg];
        let xb = &self.breakpoints[seg + 1];
        let s = &self.segments[seg];
        &s.left_val + (&s.right_val - &s.left_val) * (x - xa) / (xb - xa)
    }

    /// Limit approaching `x` from the right; at `x = 1` the point value.
    pub fn limit_right(&self, x: &Q) -> Q {
        match self.breakpoints.binary_search_by(|b| b.cmp(x)) {
            Ok(i) if i == self.breakpoints.len() - 1 => self.point_values[i].clone(),
            Ok(i) => self.segments[i].left_val.clone(),
            Err(i) => self.interp(i - 1, x),
        }
    }

    /// Limit approaching `x` from the left; at `x = 0` the point value.
    pub fn limit_left(&self, x: &Q) -> Q {
        match self.breakpoints.binary_search_by(|b| b.cmp(x)) {
            Ok(0) => self.point_values[0].clone(),
            Ok(i) => self.segments[i - 1].right_val.clone(),
            Err(i) => self.interp(i - 1, x),
        }
    }

    /// Exact supremum over the whole domain (possibly unattained).
    pub fn sup_q(&self) -> Q {
        let mut best = self.point_values[0].clone();
        for v in &self.point_values[1..] {
            best = q_max(&best, v);
        }
        for s in &self.segments {
            best = q_max(&best, &s.left_val);
            best = q_max(&best, &s.right_val);
        }
        best
    }

    /// The set of all point values and one-side limits, sorted and deduped.
    /// These are the levels at which cut topology can change.
    pub fn value_set(&self) -> Vec<Q> {
        let mut vals: Vec<Q> = self.point_values.clone();
        for s in &self.segments {
            vals.push(s.left_val.clone());
            vals.push(s.right_val.clone());
        }
        vals.sort();
        vals.dedup();
        vals
    }

    // -- predicates ----------------------------------------------------------

    /// Decides normality, convexity (quasiconcavity) and upper
    /// semicontinuity exactly from breakpoint values and one-sided limits.
    pub fn properties(&self) -> PropertyReport {
        let one = q_one();
        let normal = self.sup_q() == one;
        let attains_one = self.point_values.contains(&one)
            || self
                .segments
                .iter()
                .any(|s| s.left_val == one && s.right_val == one);

        let mut usc = true;
        let mut usc_witness = None;
        for (i, v) in self.point_values.iter().enumerate() {
            let bad_right = i < self.segments.len() && self.segments[i].left_val > *v;
            let bad_left = i > 0 && self.segments[i - 1].right_val > *v;
            if bad_right || bad_left {
                usc = false;
                usc_witness = Some(self.breakpoints[i].clone());
                break;
            }
        }

        let (convex, convex_witness) = self.quasiconcave();

        let witness = if !usc {
            usc_witness
        } else if !convex {
            convex_witness
        } else {
            None
        };
        PropertyReport {
            normal,
            convex,
            usc,
            attains_one,
            witness: witness.map(|w| UnitValue::new(w).unwrap()),
        }
    }

    /// Exact quasiconcavity test: a point `y` violates it iff values
    /// strictly above `f(y)` exist on both sides. Prefix/suffix suprema over
    /// the ordered event list (point values and segment limits) decide this
    /// for breakpoints and, per monotone segment case, for interior points.
    fn quasiconcave(&self) -> (bool, Option<Q>) {
        let n = self.breakpoints.len();
        let mut prefix_excl: Vec<Bound> = Vec::with_capacity(n);
        prefix_excl.push(Bound::Unbounded);
        for i in 1..n {
            let mut b = Bound::Unbounded;
            if let Some(prev) = prefix_excl[i - 1].get() {
                b.fold(&prev.clone());
            }
            b.fold(&self.point_values[i - 1]);
            b.fold(&self.segments[i - 1].left_val);
            b.fold(&self.segments[i - 1].right_val);
            prefix_excl.push(b);
        }
        let mut suffix_excl: Vec<Bound> = (0..n).map(|_| Bound::Unbounded).collect();
        for i in (0..n - 1).rev() {
            let mut b = Bound::Unbounded;
            if let Some(next) = suffix_excl[i + 1].get() {
                b.fold(&next.clone());
            }
            b.fold(&self.point_values[i + 1]);
            b.fold(&self.segments[i].left_val);
            b.fold(&self.segments[i].right_val);
            suffix_excl[i] = b;
        }

        for i in 0..n {
            let v = &self.point_values[i];
            if prefix_excl[i].gt(v) && suffix_excl[i].gt(v) {
                return (false, Some(self.breakpoints[i].clone()));
            }
        }
        for i in 0..self.segments.len() {
            let s = &self.segments[i];
            let (xa, xb) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
            let mut pre = Bound::Unbounded;
            if let Some(p) = prefix_excl[i].get() {
                pre.fold(&p.clone());
            }
            pre.fold(&self.point_values[i]);
            let mut suf = Bound::Unbounded;
            if let Some(sv) = suffix_excl[i + 1].get() {
                suf.fold(&sv.clone());
            }
            suf.fold(&self.point_values[i + 1]);
            match s.left_val.cmp(&s.right_val) {
                std::cmp::Ordering::Less => {
                    // Rising piece: a dip exists iff something left already
                    // exceeds the infimum at the left end.
                    if pre.gt(&s.left_val) {
                        let a = q_min(pre.get().unwrap(), &s.right_val);
                        let t = (&a - &s.left_val) / (&s.right_val - &s.left_val);
                        let w = xa + t / Q::from_integer(2.into()) * (xb - xa);
                        return (false, Some(w));
                    }
                }
                std::cmp::Ordering::Greater => {
                    if suf.gt(&s.right_val) {
                        let b = q_min(suf.get().unwrap(), &s.left_val);
                        let t = (&b - &s.right_val) / (&s.left_val - &s.right_val);
                        let w = xb - t / Q::from_integer(2.into()) * (xb - xa);
                        return (false, Some(w));
                    }
                }
                std::cmp::Ordering::Equal => {
                    if pre.gt(&s.left_val) && suf.gt(&s.left_val) {
                        let w = (xa + xb) / Q::from_integer(2.into());
                        return (false, Some(w));
                    }
                }
            }
        }
        (true, None)
    }

    // -- cuts ----------------------------------------------------------------

    /// Exact alpha-cut `{x : f(x) >= alpha}` as maximal components with
    /// closure flags. The 0-cut is the whole domain by definition.
    pub fn alpha_cut(&self, alpha: &UnitValue) -> Vec<CutComponent> {
        if alpha.is_zero() {
            return vec![CutComponent {
                lo: q_zero(),
                hi: q_one(),
                lo_closed: true,
                hi_closed: true,
            }];
        }
        self.level_set(alpha.as_q(), false)
    }

    /// Exact strong cut `{x : f(x) > alpha}`.
    pub fn strong_cut(&self, alpha: &UnitValue) -> Vec<CutComponent> {
        self.level_set(alpha.as_q(), true)
    }

    fn level_set(&self, alpha: &Q, strict: bool) -> Vec<CutComponent> {
        let keep = |v: &Q| if strict { v > alpha } else { v >= alpha };
        let mut out: Vec<CutComponent> = Vec::new();
        let mut push = |c: CutComponent| {
            if let Some(last) = out.last_mut() {
                if last.hi == c.lo && (last.hi_closed || c.lo_closed) {
                    last.hi = c.hi;
                    last.hi_closed = c.hi_closed;
                    return;
                }
            }
            out.push(c);
        };
        for i in 0..self.breakpoints.len() {
            if keep(&self.point_values[i]) {
                push(CutComponent {
                    lo: self.breakpoints[i].clone(),
                    hi: self.breakpoints[i].clone(),
                    lo_closed: true,
                    hi_closed: true,
                });
            }
            if i >= self.segments.len() {
                break;
            }
            let s = &self.segments[i];
            let (xa, xb) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
            let (lv, rv) = (&s.left_val, &s.right_val);
            let solve = |target_num: &Q| -> Q {
                // x with interp(x) = alpha on a non-constant piece.
                xa + (target_num - lv) / (rv - lv) * (xb - xa)
            };
            match lv.cmp(rv) {
                std::cmp::Ordering::Equal => {
                    if keep(lv) {
                        push(CutComponent {
                            lo: xa.clone(),
                            hi: xb.clone(),
                            lo_closed: false,
                            hi_closed: false,
                        });
                    }
                }
                std::cmp::Ordering::Less => {
                    // Rising: the kept set is a right part of the gap.
                    let whole = if strict { alpha < lv } else { alpha <= lv };
                    let empty = if strict { alpha >= rv } else { alpha > rv };
                    if whole {
                        push(CutComponent {
                            lo: xa.clone(),
                            hi: xb.clone(),
                            lo_closed: false,
                            hi_closed: false,
                        });
                    } else if !empty {
                        let x = solve(alpha);
                        if strict {
                            push(CutComponent {
                                lo: x,
                                hi: xb.clone(),
                                lo_closed: false,
                                hi_closed: false,
                            });
                        } else if x < *xb {
                            push(CutComponent {
                                lo: x,
                                hi: xb.clone(),
                                lo_closed: true,
                                hi_closed: false,
                            });
                        }
                    }
                }
                std::cmp::Ordering::Greater => {
                    let whole = if strict { alpha < rv } else { alpha <= rv };
                    let empty = if strict { alpha >= lv } else { alpha > lv };
                    if whole {
                        push(CutComponent {
                            lo: xa.clone(),
                            hi: xb.clone(),
                            lo_closed: false,
                            hi_closed: false,
                        });
                    } else if !empty {
                        let x = solve(alpha);
                        if strict {
                            push(CutComponent {
                                lo: xa.clone(),
                                hi: x,
                                lo_closed: false,
                                hi_closed: false,
                            });
                        } else if x > *xa {
                            push(CutComponent {
                                lo: xa.clone(),
                                hi: x,
                                lo_closed: false,
                                hi_closed: true,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    // -- envelopes and combination -------------------------------------------

    /// `x -> sup { f(y) : y >= x }`, exact. Monotone nonincreasing.
    pub fn right_sup_envelope(&self) -> TruthValue {
        let k = self.segments.len();
        let mut pts_rev: Vec<(Q, Q)> = vec![(
            self.breakpoints[k].clone(),
            self.point_values[k].clone(),
        )];
        let mut segs_rev: Vec<Segment> = Vec::new();
        let mut carry = self.point_values[k].clone(); // sup over [x, 1] so far
        for i in (0..k).rev() {
            let s = &self.segments[i];
            let (xa, xb) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
            let (lv, rv) = (&s.left_val, &s.right_val);
            if lv <= rv {
                // Rising toward an unattained limit: envelope is flat here.
                let c = q_max(rv, &carry);
                segs_rev.push(Segment::constant(c));
            } else if &carry >= lv {
                segs_rev.push(Segment::constant(carry.clone()));
            } else if &carry <= rv {
                segs_rev.push(s.clone());
            } else {
                // Falling piece crosses the carried sup: split there.
                let t = (&carry - lv) / (rv - lv);
                let x_split = xa + t * (xb - xa);
                segs_rev.push(Segment::constant(carry.clone()));
                pts_rev.push((x_split, carry.clone()));
                segs_rev.push(Segment {
                    left_val: lv.clone(),
                    right_val: carry.clone(),
                });
            }
            carry = q_max(&carry, &q_max(lv, rv));
            carry = q_max(&carry, &self.point_values[i]);
            pts_rev.push((xa.clone(), carry.clone()));
        }
        pts_rev.reverse();
        segs_rev.reverse();
        let (bps, pv): (Vec<Q>, Vec<Q>) = pts_rev.into_iter().unzip();
        TruthValue::new(bps, pv, segs_rev)
            .expect("envelope stays in range")
            .canonical()
    }

    /// `x -> sup { f(y) : y <= x }`, exact. Monotone nondecreasing.
    pub fn left_sup_envelope(&self) -> TruthValue {
        self.mirror().right_sup_envelope().mirror()
    }

    /// Reflection `x -> f(1 - x)`.
    pub fn mirror(&self) -> TruthValue {
        let one = q_one();
        let bps: Vec<Q> = self.breakpoints.iter().rev().map(|x| &one - x).collect();
        let pv: Vec<Q> = self.point_values.iter().rev().cloned().collect();
        let segs: Vec<Segment> = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                left_val: s.right_val.clone(),
                right_val: s.left_val.clone(),
            })
            .collect();
        TruthValue::new(bps, pv, segs).expect("mirror preserves validity")
    }

    /// Exact pointwise minimum.
    pub fn pointwise_min(&self, other: &TruthValue) -> TruthValue {
        self.combine(other, false)
    }

    /// Exact pointwise maximum.
    pub fn pointwise_max(&self, other: &TruthValue) -> TruthValue {
        self.combine(other, true)
    }

    fn combine(&self, other: &TruthValue, take_max: bool) -> TruthValue {
        let op = |a: &Q, b: &Q| if take_max { q_max(a, b) } else { q_min(a, b) };
        // Refine at both breakpoint sets plus interior crossings, after
        // which one operand dominates each open gap.
        let mut xs: Vec<Q> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        xs.sort();
        xs.dedup();
        let mut points: Vec<Q> = Vec::with_capacity(xs.len() * 2);
        for w in xs.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            points.push(a.clone());
            let da = self.limit_right(a) - other.limit_right(a);
            let db = self.limit_left(b) - other.limit_left(b);
            let zero = q_zero();
            if (da > zero && db < zero) || (da < zero && db > zero) {
                let t = &da / (&da - &db);
                points.push(a + t * (b - a));
            }
        }
        points.push(xs.last().unwrap().clone());

        let pv: Vec<Q> = points
            .iter()
            .map(|x| op(&self.eval_q(x), &other.eval_q(x)))
            .collect();
        let segs: Vec<Segment> = points
            .windows(2)
            .map(|w| Segment {
                left_val: op(&self.limit_right(&w[0]), &other.limit_right(&w[0])),
                right_val: op(&self.limit_left(&w[1]), &other.limit_left(&w[1])),
            })
            .collect();
        TruthValue::new(points, pv, segs)
            .expect("combination stays in range")
            .canonical()
    }

    // -- canonical form -------------------------------------------------------

    /// Merges collinear adjacent segments and drops removable breakpoints.
    /// Two truth values represent the same function iff their canonical
    /// forms are structurally equal.
    pub fn canonical(&self) -> TruthValue {
        let k = self.segments.len();
        let mut bps = vec![self.breakpoints[0].clone()];
        let mut pv = vec![self.point_values[0].clone()];
        let mut segs: Vec<Segment> = Vec::with_capacity(k);
        let mut cur = self.segments[0].clone();
        let mut cur_start = self.breakpoints[0].clone();
        for i in 1..k {
            let x = &self.breakpoints[i];
            let v = &self.point_values[i];
            let next = &self.segments[i];
            let x_next = &self.breakpoints[i + 1];
            let continuous = cur.right_val == *v && *v == next.left_val;
            let collinear = (&cur.right_val - &cur.left_val) * (x_next - x)
                == (&next.right_val - &next.left_val) * (x - &cur_start);
            if continuous && collinear {
                cur.right_val = next.right_val.clone();
            } else {
                bps.push(x.clone());
                pv.push(v.clone());
                segs.push(cur);
                cur = next.clone();
                cur_start = x.clone();
            }
        }
        bps.push(self.breakpoints[k].clone());
        pv.push(self.point_values[k].clone());
        segs.push(cur);
        TruthValue {
            breakpoints: bps,
            point_values: pv,
            segments: segs,
        }
    }

    /// Function equality (same values everywhere), decided exactly.
    pub fn fn_eq(&self, other: &TruthValue) -> bool {
        self.canonical() == other.canonical()
    }
}

fn check_open_unit(name: &str, v: &UnitValue) -> Result<()> {
    if v.is_zero() || v.is_one() {
        return Err(Error::BadShape(format!(
            "{name} must lie strictly inside (0, 1), got {v}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON form:
// {"breakpoints": [...], "point_values": [...],
//  "segments": [{"left_val": r, "right_val": r}, ...]}

#[derive(Serialize, Deserialize)]
struct SegmentJson {
    left_val: f64,
    right_val: f64,
}

#[derive(Serialize, Deserialize)]
struct TruthValueJson {
    breakpoints: Vec<f64>,
    point_values: Vec<f64>,
    segments: Vec<SegmentJson>,
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TruthValueJson {
            breakpoints: self.breakpoints.iter().map(q_to_f64).collect(),
            point_values: self.point_values.iter().map(q_to_f64).collect(),
            segments: self
                .segments
                .iter()
                .map(|s| SegmentJson {
                    left_val: q_to_f64(&s.left_val),
                    right_val: q_to_f64(&s.right_val),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TruthValueJson::deserialize(deserializer)?;
        let to_q = |x: f64, field: &str| -> std::result::Result<Q, D::Error> {
            UnitValue::from_f64(x)
                .map(UnitValue::into_q)
                .map_err(|e| D::Error::custom(format!("invalid field `{field}`: {e}")))
        };
        let bps = raw
            .breakpoints
            .into_iter()
            .map(|x| to_q(x, "breakpoints"))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let pv = raw
            .point_values
            .into_iter()
            .map(|x| to_q(x, "point_values"))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let segs = raw
            .segments
            .into_iter()
            .map(|s| {
                Ok(Segment {
                    left_val: to_q(s.left_val, "segments.left_val")?,
                    right_val: to_q(s.right_val, "segments.right_val")?,
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        TruthValue::new(bps, pv, segs).map_err(D::Error::custom)
    }
}
