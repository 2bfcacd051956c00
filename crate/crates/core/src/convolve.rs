//! The sup-convolution `(f *^ g)(x) = sup { f(a) ^ g(b) : a * b = x }`
//! (sup over the empty fiber is 0), computed three ways:
//!
//! * a pointwise brute-force sampling oracle over grid pairs,
//! * an exact closed form for the all-minimum case, built from right-sup
//!   envelopes, and
//! * the fast alpha-cut frontier engine, whose correctness contract is
//!   exactly the closure theorem's hypothesis: continuous `*`,
//!   right-continuous `^`.

use std::io::Write;

use crate::cuts::{CutFamily, Interval};
use crate::error::{Error, Result};
use crate::tnorm::TnormSpec;
use crate::truth::TruthValue;
use crate::unit::{q_to_f64, Q, UnitValue};

/// `f64` view of a truth value for dense sampling.
pub struct F64Tv {
    xs: Vec<f64>,
    vs: Vec<f64>,
    segs: Vec<(f64, f64)>,
}

impl F64Tv {
    pub fn new(tv: &TruthValue) -> Self {
        F64Tv {
            xs: tv.breakpoints().iter().map(q_to_f64).collect(),
            vs: tv.point_values().iter().map(q_to_f64).collect(),
            segs: tv
                .segments()
                .iter()
                .map(|s| (q_to_f64(&s.left_val), q_to_f64(&s.right_val)))
                .collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.xs.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
            Ok(i) => self.vs[i],
            Err(i) => {
                let (xa, xb) = (self.xs[i - 1], self.xs[i]);
                let (lv, rv) = self.segs[i - 1];
                lv + (rv - lv) * (x - xa) / (xb - xa)
            }
        }
    }
}

/// Finite-evidence lower envelope of a convolution, sampled on an
/// `n + 1`-point grid. Cells are centered at grid points; `cell_sup` keeps
/// each cell's running max, `point_best` the same max with the witness pair
/// `(a, b)` realizing it, so `point_best <= cell_sup` holds by construction.
/// Cells no fiber hits stay at 0.
pub struct SampledFunction {
    n: usize,
    cell_sup: Vec<f64>,
    point_best: Vec<f64>,
    witnesses: Vec<Option<(f64, f64)>>,
}

impl SampledFunction {
    fn empty(n: usize) -> Self {
        SampledFunction {
            n,
            cell_sup: vec![0.0; n + 1],
            point_best: vec![0.0; n + 1],
            witnesses: vec![None; n + 1],
        }
    }

    fn record(&mut self, z: f64, v: f64, a: f64, b: f64) {
        let bin = ((z * self.n as f64).round() as usize).min(self.n);
        if v > self.cell_sup[bin] {
            self.cell_sup[bin] = v;
        }
        if v > self.point_best[bin] || self.witnesses[bin].is_none() {
            self.point_best[bin] = v;
            self.witnesses[bin] = Some((a, b));
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_x(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn value(&self, j: usize) -> f64 {
        self.point_best[j]
    }

    pub fn cell_sup(&self, j: usize) -> f64 {
        self.cell_sup[j]
    }

    pub fn witness(&self, j: usize) -> Option<(f64, f64)> {
        self.witnesses[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.point_best
    }

    /// Rows `x,value,witness_a,witness_b`; unhit cells emit empty witnesses.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "x,value,witness_a,witness_b")?;
        for j in 0..=self.n {
            match self.witnesses[j] {
                Some((a, b)) => writeln!(
                    w,
                    "{},{},{},{}",
                    self.grid_x(j),
                    self.point_best[j],
                    a,
                    b
                )?,
                None => writeln!(w, "{},{},,", self.grid_x(j), self.point_best[j])?,
            }
        }
        Ok(())
    }
}

/// Brute-force sampling of the convolution over all `(n+1)^2` grid pairs.
/// A lower bound at every witness; for continuous `*` and right-continuous
/// `^` the sup is attained, so the envelope converges as `n` grows.
pub fn convolve_oracle(
    f: &TruthValue,
    g: &TruthValue,
    star: &TnormSpec,
    tri: &TnormSpec,
    n: usize,
) -> SampledFunction {
    assert!(n >= 16, "oracle grid too coarse");
    let ftv = F64Tv::new(f);
    let gtv = F64Tv::new(g);
    let nf = n as f64;
    let fvals: Vec<f64> = (0..=n).map(|i| ftv.eval(i as f64 / nf)).collect();
    let gvals: Vec<f64> = (0..=n).map(|j| gtv.eval(j as f64 / nf)).collect();
    let mut out = SampledFunction::empty(n);
    for (i, fa) in fvals.iter().enumerate() {
        let a = i as f64 / nf;
        for (j, gb) in gvals.iter().enumerate() {
            let b = j as f64 / nf;
            let z = star.eval_f64(a, b);
            let v = tri.eval_f64(*fa, *gb);
            out.record(z, v, a, b);
        }
    }
    out
}

/// Triple-fiber analogue over `(n+1)^3` grid triples (`n` capped at 200);
/// the reference for associativity checks. Symmetric in the three inputs up
/// to the fixed left-association of the `f64` operations.
pub fn convolve3_oracle(
    f: &TruthValue,
    g: &TruthValue,
    h: &TruthValue,
    star: &TnormSpec,
    tri: &TnormSpec,
    n: usize,
) -> SampledFunction {
    assert!(n >= 16, "oracle grid too coarse");
    let n = n.min(200);
    let nf = n as f64;
    let fvals: Vec<f64> = {
        let t = F64Tv::new(f);
        (0..=n).map(|i| t.eval(i as f64 / nf)).collect()
    };
    let gvals: Vec<f64> = {
        let t = F64Tv::new(g);
        (0..=n).map(|i| t.eval(i as f64 / nf)).collect()
    };
    let hvals: Vec<f64> = {
        let t = F64Tv::new(h);
        (0..=n).map(|i| t.eval(i as f64 / nf)).collect()
    };
    let mut out = SampledFunction::empty(n);
    for (i, fa) in fvals.iter().enumerate() {
        let a = i as f64 / nf;
        for (j, gb) in gvals.iter().enumerate() {
            let b = j as f64 / nf;
            let ab = star.eval_f64(a, b);
            let vab = tri.eval_f64(*fa, *gb);
            for (k, hc) in hvals.iter().enumerate() {
                let c = k as f64 / nf;
                let z = star.eval_f64(ab, c);
                let v = tri.eval_f64(vab, *hc);
                out.record(z, v, a, c);
            }
        }
    }
    out
}

/// Exact convolution meet `f /\ g` (both operations the minimum).
///
/// The fiber of `z` under the minimum is `({z} x [z,1]) u ([z,1] x {z})`,
/// so the sup collapses to
/// `max( min(f(z), Er g(z)), min(g(z), Er f(z)) )`
/// with `Er` the right-sup envelope. Total on truth values.
pub fn meet_min(f: &TruthValue, g: &TruthValue) -> TruthValue {
    let erf = f.right_sup_envelope();
    let erg = g.right_sup_envelope();
    f.pointwise_min(&erg).pointwise_max(&g.pointwise_min(&erf))
}

/// Exact value of `(f *^ g)(z)` when `*` is the minimum and `f, g` are usc:
/// suprema over the two fiber legs are attained, so monotonicity of `^`
/// collapses them to envelope values.
pub fn min_star_convolve_at(f: &TruthValue, g: &TruthValue, tri: &TnormSpec, z: &Q) -> Q {
    let erf = f.right_sup_envelope();
    let erg = g.right_sup_envelope();
    let a = tri.eval_q(&f.eval_q(z), &erg.eval_q(z));
    let b = tri.eval_q(&erf.eval_q(z), &g.eval_q(z));
    if a >= b {
        a
    } else {
        b
    }
}

/// Frontier pair indices realizing each output endpoint, per level.
#[derive(Debug, Clone, Copy)]
pub struct CutWitness {
    pub lo_pair: (usize, usize),
    pub hi_pair: (usize, usize),
}

/// The alpha-cut engine: for each grid level `t`, the output cut is
///
/// `[ min over S_t of lo_f(i) * lo_g(j),  max over S_t of hi_f(i) * hi_g(j) ]`
///
/// where `S_t = {(i, j) : alpha_i ^ alpha_j >= alpha_t}`. Monotonicity of
/// `^` makes `S_t` an up-set, so both extrema are attained on its minimal
/// staircase frontier, scanned with two pointers in `O(m)` per level.
pub fn convolve_cuts(
    fc: &CutFamily,
    gc: &CutFamily,
    star: &TnormSpec,
    tri: &TnormSpec,
) -> Result<CutFamily> {
    convolve_cuts_with_witnesses(fc, gc, star, tri).map(|(fam, _)| fam)
}

pub fn convolve_cuts_with_witnesses(
    fc: &CutFamily,
    gc: &CutFamily,
    star: &TnormSpec,
    tri: &TnormSpec,
) -> Result<(CutFamily, Vec<CutWitness>)> {
    let ctx = EngineCtx::new(fc, gc, star, tri)?;
    let m = ctx.alphas.len();
    let mut cuts = Vec::with_capacity(m);
    let mut wits = Vec::with_capacity(m);
    for t in 0..m {
        let mut best_lo = f64::INFINITY;
        let mut best_hi = f64::NEG_INFINITY;
        let mut w = CutWitness {
            lo_pair: (m - 1, m - 1),
            hi_pair: (m - 1, m - 1),
        };
        // j_min(i) is nonincreasing in i, so one descending pointer serves
        // the whole ascending sweep over i.
        let mut jprev = m - 1;
        for i in 0..m {
            if ctx.tri_table[i * m + (m - 1)] < ctx.alphas[t] {
                continue; // no j admits this i
            }
            let mut j = jprev;
            while j > 0 && ctx.tri_table[i * m + (j - 1)] >= ctx.alphas[t] {
                j -= 1;
            }
            jprev = j;
            let lo = star.eval_f64(ctx.flo[i], ctx.glo[j]);
            if lo < best_lo {
                best_lo = lo;
                w.lo_pair = (i, j);
            }
            let hi = star.eval_f64(ctx.fhi[i], ctx.ghi[j]);
            if hi > best_hi {
                best_hi = hi;
                w.hi_pair = (i, j);
            }
        }
        cuts.push(ctx.interval(best_lo, best_hi)?);
        wits.push(w);
    }
    let fam = CutFamily::new(fc.alpha_grid().to_vec(), cuts)?;
    Ok((fam, wits))
}

/// Reference implementation scanning every pair of `S_t` per level,
/// `O(m^2)` per level. Must produce exactly the endpoints of the frontier
/// scan; kept as the regression oracle for the staircase optimization.
pub fn convolve_cuts_brute(
    fc: &CutFamily,
    gc: &CutFamily,
    star: &TnormSpec,
    tri: &TnormSpec,
) -> Result<CutFamily> {
    let ctx = EngineCtx::new(fc, gc, star, tri)?;
    let m = ctx.alphas.len();
    let mut cuts = Vec::with_capacity(m);
    for t in 0..m {
        let mut best_lo = f64::INFINITY;
        let mut best_hi = f64::NEG_INFINITY;
        for i in 0..m {
            for j in 0..m {
                if ctx.tri_table[i * m + j] < ctx.alphas[t] {
                    continue;
                }
                best_lo = best_lo.min(star.eval_f64(ctx.flo[i], ctx.glo[j]));
                best_hi = best_hi.max(star.eval_f64(ctx.fhi[i], ctx.ghi[j]));
            }
        }
        cuts.push(ctx.interval(best_lo, best_hi)?);
    }
    CutFamily::new(fc.alpha_grid().to_vec(), cuts)
}

struct EngineCtx {
    alphas: Vec<f64>,
    flo: Vec<f64>,
    fhi: Vec<f64>,
    glo: Vec<f64>,
    ghi: Vec<f64>,
    tri_table: Vec<f64>,
}

impl EngineCtx {
    fn new(fc: &CutFamily, gc: &CutFamily, star: &TnormSpec, tri: &TnormSpec) -> Result<Self> {
        if !fc.same_grid(gc) {
            return Err(Error::GridMismatch);
        }
        if !star.is_continuous() {
            return Err(Error::HypothesisViolation(format!(
                "star t-norm `{}` must be continuous",
                star.name()
            )));
        }
        if !tri.is_right_continuous() {
            return Err(Error::HypothesisViolation(format!(
                "tri t-norm `{}` must be right-continuous",
                tri.name()
            )));
        }
        let alphas: Vec<f64> = fc.alpha_grid().iter().map(|a| a.to_f64()).collect();
        let m = alphas.len();
        let mut tri_table = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                tri_table[i * m + j] = tri.eval_f64(alphas[i], alphas[j]);
            }
        }
        Ok(EngineCtx {
            alphas,
            flo: fc.cuts().iter().map(|c| c.lo().to_f64()).collect(),
            fhi: fc.cuts().iter().map(|c| c.hi().to_f64()).collect(),
            glo: gc.cuts().iter().map(|c| c.lo().to_f64()).collect(),
            ghi: gc.cuts().iter().map(|c| c.hi().to_f64()).collect(),
            tri_table,
        })
    }

    fn interval(&self, lo: f64, hi: f64) -> Result<Interval> {
        // S_t always contains (m-1, m-1), so both folds ran.
        debug_assert!(lo.is_finite() && hi.is_finite());
        Interval::new(
            UnitValue::from_f64(lo.clamp(0.0, 1.0))?,
            UnitValue::from_f64(hi.clamp(0.0, 1.0))?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::{q, q_one, q_zero};

    fn u(num: i64, den: i64) -> UnitValue {
        UnitValue::from_ratio(num, den).unwrap()
    }

    fn tri_tv() -> TruthValue {
        TruthValue::triangle_tv(&UnitValue::zero(), &u(1, 2), &UnitValue::one()).unwrap()
    }

    #[test]
    fn oracle_point_masses_concentrate() {
        // point(0.3) * point(0.5) under the product: all mass in the cell
        // of 0.15, regardless of the tri operation.
        let f = TruthValue::point_tv(&u(3, 10));
        let g = TruthValue::point_tv(&u(1, 2));
        for tri in [TnormSpec::minimum(), TnormSpec::drastic()] {
            let s = convolve_oracle(&f, &g, &TnormSpec::product(), &tri, 1000);
            for j in 0..=1000 {
                let expect = if j == 150 { 1.0 } else { 0.0 };
                assert_eq!(s.value(j), expect, "bin {j}");
            }
            let (a, b) = s.witness(150).unwrap();
            assert_eq!((a, b), (0.3, 0.5));
        }
    }

    #[test]
    fn oracle_unit_element_recovers_f() {
        let f = tri_tv();
        let one = TruthValue::point_tv(&UnitValue::one());
        let ftv = F64Tv::new(&f);
        let s = convolve_oracle(&f, &one, &TnormSpec::product(), &TnormSpec::lukasiewicz(), 200);
        for j in 0..=200 {
            let x = j as f64 / 200.0;
            assert!((s.value(j) - ftv.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_matches_interval_image_endpoints() {
        let f = TruthValue::interval_tv(&u(1, 5), &u(1, 2)).unwrap();
        let g = TruthValue::interval_tv(&u(2, 5), &UnitValue::one()).unwrap();
        let s = convolve_oracle(&f, &g, &TnormSpec::product(), &TnormSpec::minimum(), 1000);
        // Support of the sampled mass vs [0.08, 0.5].
        let hit: Vec<usize> = (0..=1000).filter(|&j| s.value(j) > 0.5).collect();
        let lo = *hit.first().unwrap() as f64 / 1000.0;
        let hi = *hit.last().unwrap() as f64 / 1000.0;
        assert!((lo - 0.08).abs() <= 1.0 / 1000.0 + 1e-12);
        assert!((hi - 0.5).abs() <= 1.0 / 1000.0 + 1e-12);
    }

    #[test]
    fn eq_2_1_lower_bound_at_witness_cells() {
        // Oracle cell value at a * b dominates f(a) ^ g(b) for grid pairs.
        let f = tri_tv();
        let g = TruthValue::trapezoid_tv(&u(1, 8), &u(1, 4), &u(1, 2), &u(3, 4)).unwrap();
        let (star, tri) = (TnormSpec::lukasiewicz(), TnormSpec::product());
        let n = 128;
        let s = convolve_oracle(&f, &g, &star, &tri, n);
        let (ftv, gtv) = (F64Tv::new(&f), F64Tv::new(&g));
        for i in 0..=n {
            for j in 0..=n {
                let a = i as f64 / n as f64;
                let b = j as f64 / n as f64;
                let z = star.eval_f64(a, b);
                let bin = ((z * n as f64).round() as usize).min(n);
                assert!(s.cell_sup(bin) >= tri.eval_f64(ftv.eval(a), gtv.eval(b)) - 1e-15);
            }
        }
    }

    #[test]
    fn meet_min_idempotent_and_examples() {
        let f = tri_tv();
        assert!(meet_min(&f, &f).fn_eq(&f));

        let a = TruthValue::interval_tv(&u(1, 5), &u(1, 2)).unwrap();
        let b = TruthValue::interval_tv(&u(2, 5), &u(9, 10)).unwrap();
        assert!(meet_min(&a, &b).fn_eq(&a));

        let p = TruthValue::point_tv(&u(7, 10));
        let q_ = TruthValue::point_tv(&u(2, 5));
        assert!(meet_min(&p, &q_).fn_eq(&q_));
    }

    #[test]
    fn meet_min_agrees_with_oracle_on_grid() {
        let f = tri_tv();
        let g = TruthValue::trapezoid_tv(&u(1, 4), &u(1, 2), &u(5, 8), &u(7, 8)).unwrap();
        let m = meet_min(&f, &g);
        let n = 2000;
        let s = convolve_oracle(&f, &g, &TnormSpec::minimum(), &TnormSpec::minimum(), n);
        let mtv = F64Tv::new(&m);
        for j in 0..=n {
            let x = j as f64 / n as f64;
            assert!(
                (s.value(j) - mtv.eval(x)).abs() <= 1.0 / n as f64,
                "bin {j}: oracle {} vs exact {}",
                s.value(j),
                mtv.eval(x)
            );
        }
    }

    #[test]
    fn min_star_pointwise_formula_matches_meet() {
        let f = tri_tv();
        let g = TruthValue::interval_tv(&u(1, 4), &u(5, 8)).unwrap();
        let m = meet_min(&f, &g);
        let tri = TnormSpec::minimum();
        for i in 0..=200 {
            let z = q(i, 200);
            assert_eq!(min_star_convolve_at(&f, &g, &tri, &z), m.eval_q(&z));
        }
    }

    #[test]
    fn engine_point_and_interval_laws_exact() {
        let grid = CutFamily::uniform_grid(16);
        let star = TnormSpec::product();
        let tri = TnormSpec::drastic();
        // x^- * y^- = (x * y)^- at cut level, exactly.
        let x = u(3, 10);
        let y = u(1, 2);
        let fc = CutFamily::cuts_of(&TruthValue::point_tv(&x), &grid).unwrap();
        let gc = CutFamily::cuts_of(&TruthValue::point_tv(&y), &grid).unwrap();
        let out = convolve_cuts(&fc, &gc, &star, &tri).unwrap();
        let z = UnitValue::from_f64(star.eval_f64(x.to_f64(), y.to_f64())).unwrap();
        let expect = CutFamily::cuts_of(&TruthValue::point_tv(&z), &grid).unwrap();
        assert_eq!(out, expect);

        // [0,1]^- * [a,b]^- = [0,b]^-.
        let full = CutFamily::cuts_of(
            &TruthValue::interval_tv(&UnitValue::zero(), &UnitValue::one()).unwrap(),
            &grid,
        )
        .unwrap();
        let ab = CutFamily::cuts_of(&TruthValue::interval_tv(&u(1, 4), &u(5, 8)).unwrap(), &grid)
            .unwrap();
        let out = convolve_cuts(&full, &ab, &star, &tri).unwrap();
        let expect = CutFamily::cuts_of(
            &TruthValue::interval_tv(&UnitValue::zero(), &u(5, 8)).unwrap(),
            &grid,
        )
        .unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn engine_unit_law_exact() {
        let grid = CutFamily::uniform_grid(32);
        let f = TruthValue::trapezoid_tv(&u(1, 8), &u(1, 4), &u(1, 2), &u(3, 4)).unwrap();
        let fc = CutFamily::cuts_of(&f, &grid).unwrap();
        let one = CutFamily::cuts_of(&TruthValue::point_tv(&UnitValue::one()), &grid).unwrap();
        for star in [TnormSpec::minimum(), TnormSpec::product(), TnormSpec::lukasiewicz()] {
            for tri in [TnormSpec::minimum(), TnormSpec::drastic()] {
                let out = convolve_cuts(&fc, &one, &star, &tri).unwrap();
                assert_eq!(out, fc, "star {} tri {}", star.name(), tri.name());
            }
        }
    }

    #[test]
    fn engine_rejects_out_of_hypothesis_operators() {
        let grid = CutFamily::uniform_grid(16);
        let fc = CutFamily::cuts_of(&tri_tv(), &grid).unwrap();
        assert!(matches!(
            convolve_cuts(&fc, &fc, &TnormSpec::drastic(), &TnormSpec::minimum()),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            convolve_cuts(&fc, &fc, &TnormSpec::minimum(), &TnormSpec::nilpotent_minimum()),
            Err(Error::HypothesisViolation(_))
        ));
        let other = CutFamily::cuts_of(&tri_tv(), &CutFamily::uniform_grid(8)).unwrap();
        assert!(matches!(
            convolve_cuts(&fc, &other, &TnormSpec::minimum(), &TnormSpec::minimum()),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn engine_commutes_exactly() {
        let grid = CutFamily::uniform_grid(64);
        let f = TruthValue::triangle_tv(&u(1, 8), &u(3, 8), &u(3, 4)).unwrap();
        let g = TruthValue::trapezoid_tv(&u(1, 4), &u(1, 2), &u(5, 8), &UnitValue::one()).unwrap();
        let fc = CutFamily::cuts_of(&f, &grid).unwrap();
        let gc = CutFamily::cuts_of(&g, &grid).unwrap();
        for star in [TnormSpec::product(), TnormSpec::lukasiewicz()] {
            for tri in [TnormSpec::drastic(), TnormSpec::product()] {
                let ab = convolve_cuts(&fc, &gc, &star, &tri).unwrap();
                let ba = convolve_cuts(&gc, &fc, &star, &tri).unwrap();
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn frontier_scan_equals_brute_scan() {
        let grid = CutFamily::uniform_grid(48);
        let f = TruthValue::triangle_tv(&u(1, 8), &u(3, 8), &u(3, 4)).unwrap();
        let g = TruthValue::trapezoid_tv(&u(1, 4), &u(1, 2), &u(5, 8), &UnitValue::one()).unwrap();
        let fc = CutFamily::cuts_of(&f, &grid).unwrap();
        let gc = CutFamily::cuts_of(&g, &grid).unwrap();
        for star in [TnormSpec::minimum(), TnormSpec::product(), TnormSpec::lukasiewicz()] {
            for tri in [TnormSpec::minimum(), TnormSpec::drastic(), TnormSpec::lukasiewicz()] {
                let fast = convolve_cuts(&fc, &gc, &star, &tri).unwrap();
                let brute = convolve_cuts_brute(&fc, &gc, &star, &tri).unwrap();
                assert_eq!(fast, brute, "star {} tri {}", star.name(), tri.name());
            }
        }
    }

    #[test]
    fn engine_witnesses_reproduce_endpoints() {
        let grid = CutFamily::uniform_grid(32);
        let f = TruthValue::triangle_tv(&u(1, 8), &u(3, 8), &u(3, 4)).unwrap();
        let g = TruthValue::trapezoid_tv(&u(1, 4), &u(1, 2), &u(5, 8), &UnitValue::one()).unwrap();
        let fc = CutFamily::cuts_of(&f, &grid).unwrap();
        let gc = CutFamily::cuts_of(&g, &grid).unwrap();
        let star = TnormSpec::product();
        let tri = TnormSpec::lukasiewicz();
        let (out, wits) = convolve_cuts_with_witnesses(&fc, &gc, &star, &tri).unwrap();
        let alphas = fc.alpha_grid();
        for (t, w) in wits.iter().enumerate() {
            let (i, j) = w.lo_pair;
            // Witness pair is a member of S_t and realizes the endpoint.
            assert!(tri.eval_f64(alphas[i].to_f64(), alphas[j].to_f64()) >= alphas[t].to_f64());
            let lo = star.eval_f64(fc.cuts()[i].lo().to_f64(), gc.cuts()[j].lo().to_f64());
            assert_eq!(lo, out.cuts()[t].lo().to_f64());
            let (i, j) = w.hi_pair;
            let hi = star.eval_f64(fc.cuts()[i].hi().to_f64(), gc.cuts()[j].hi().to_f64());
            assert_eq!(hi, out.cuts()[t].hi().to_f64());
        }
    }

    #[test]
    fn meet_min_consistent_with_engine_under_min_min() {
        let m = 64usize;
        let grid = CutFamily::uniform_grid(m);
        let f = TruthValue::triangle_tv(&u(1, 8), &u(3, 8), &u(3, 4)).unwrap();
        let g = TruthValue::trapezoid_tv(&u(1, 4), &u(1, 2), &u(5, 8), &UnitValue::one()).unwrap();
        let fc = CutFamily::cuts_of(&f, &grid).unwrap();
        let gc = CutFamily::cuts_of(&g, &grid).unwrap();
        let eng = convolve_cuts(&fc, &gc, &TnormSpec::minimum(), &TnormSpec::minimum())
            .unwrap()
            .to_tv();
        let exact = meet_min(&f, &g);
        for i in 0..=1000 {
            let x = q(i, 1000);
            let diff = exact.eval_q(&x) - eng.eval_q(&x);
            assert!(
                diff >= q_zero() && diff <= q(1, m as i64),
                "at {i}: staircase deviates by more than 1/m"
            );
        }
    }

    #[test]
    fn grid_refinement_is_monotone_from_below() {
        // Doubling the oracle resolution never loses a witness: each pair
        // found at the coarse level is enumerated again and its value is
        // reported in whatever fine cell its product lands in.
        let f = tri_tv();
        let g = TruthValue::trapezoid_tv(&u(1, 4), &u(1, 2), &u(5, 8), &u(7, 8)).unwrap();
        let (star, tri) = (TnormSpec::product(), TnormSpec::product());
        let coarse = convolve_oracle(&f, &g, &star, &tri, 250);
        let fine = convolve_oracle(&f, &g, &star, &tri, 500);
        for j in 0..=250 {
            if let Some((a, b)) = coarse.witness(j) {
                let z = star.eval_f64(a, b);
                let k = ((z * 500.0).round() as usize).min(500);
                assert!(fine.value(k) >= coarse.value(j));
            }
        }
    }

    #[test]
    fn convolve3_matches_pair_convolution_with_unit() {
        let f = tri_tv();
        let g = TruthValue::interval_tv(&u(1, 4), &u(5, 8)).unwrap();
        let one = TruthValue::point_tv(&UnitValue::one());
        let (star, tri) = (TnormSpec::minimum(), TnormSpec::minimum());
        let pair = convolve_oracle(&f, &g, &star, &tri, 200);
        let triple = convolve3_oracle(&f, &g, &one, &star, &tri, 200);
        for j in 0..=200 {
            assert!((pair.value(j) - triple.value(j)).abs() <= 2.0 / 200.0);
        }
    }

    #[test]
    fn convolve3_point_masses() {
        let x = TruthValue::point_tv(&u(1, 2));
        let y = TruthValue::point_tv(&u(3, 4));
        let z = TruthValue::point_tv(&u(1, 4));
        let s = convolve3_oracle(&x, &y, &z, &TnormSpec::product(), &TnormSpec::minimum(), 200);
        // Mass 1 lands in the bin of 1/2 * 3/4 * 1/4 = 3/32.
        let bin = ((3.0 / 32.0) * 200.0_f64).round() as usize;
        assert_eq!(s.value(bin), 1.0);
        for j in 0..=200 {
            if j != bin {
                assert_eq!(s.value(j), 0.0);
            }
        }
    }

    #[test]
    fn empty_fiber_convention_reports_zero() {
        // Under the product with f, g supported away from 1, high cells'
        // fibers exist but carry zero mass; the top cell of a drastic star
        // composition with small supports stays exactly 0 with no witness
        // recorded beyond the default.
        let f = TruthValue::point_tv(&u(1, 4));
        let g = TruthValue::point_tv(&u(1, 2));
        let s = convolve_oracle(&f, &g, &TnormSpec::product(), &TnormSpec::minimum(), 100);
        assert_eq!(s.value(100), 0.0);
        assert_eq!(s.cell_sup(100), 0.0);
    }

    #[test]
    fn one_is_unit_of_meet() {
        let f = tri_tv();
        let one = TruthValue::point_tv(&UnitValue::one());
        assert!(meet_min(&f, &one).fn_eq(&f));
        assert_eq!(meet_min(&one, &one).eval_q(&q_one()), q_one());
    }
}
