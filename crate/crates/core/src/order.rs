//! The convolution order on truth values, decided two independent ways:
//! through the exact meet (`f <= g` iff `f /\ g = f`) and componentwise on
//! cut families.

use crate::convolve::meet_min;
use crate::cuts::CutFamily;
use crate::error::{Error, Result};
use crate::truth::TruthValue;
use crate::unit::{q_one, Q, UnitValue};

/// `f <= g` per the definition: the convolution meet equals `f` as a
/// function. Exact; no tolerance enters.
pub fn leq_convolution(f: &TruthValue, g: &TruthValue) -> bool {
    meet_min(f, g).fn_eq(f)
}

/// `f <= g` decided on cut families sharing a grid: the interval order must
/// hold at every level.
pub fn leq_cutwise(fc: &CutFamily, gc: &CutFamily) -> Result<bool> {
    if !fc.same_grid(gc) {
        return Err(Error::GridMismatch);
    }
    Ok(fc
        .cuts()
        .iter()
        .zip(gc.cuts())
        .all(|(a, b)| a.leq(b)))
}

/// A grid adapted to the given functions: every point value and one-sided
/// limit of each (the levels where cut topology can change), midpoints of
/// consecutive levels (so plateaus that drop out just above a level are
/// sampled), and the level 1.
pub fn adapted_grid(fs: &[&TruthValue]) -> Vec<UnitValue> {
    let mut vals: Vec<Q> = vec![q_one()];
    for f in fs {
        vals.extend(f.value_set());
    }
    vals.retain(|v| *v > Q::from_integer(0.into()));
    vals.sort();
    vals.dedup();
    let two = Q::from_integer(2.into());
    let mut grid: Vec<Q> = Vec::with_capacity(vals.len() * 2);
    for i in 0..vals.len() {
        if i > 0 {
            grid.push((&vals[i - 1] + &vals[i]) / &two);
        } else if vals[i] > Q::from_integer(0.into()) {
            // Half the smallest level probes below every positive value.
            grid.push(&vals[i] / &two);
        }
        grid.push(vals[i].clone());
    }
    grid.sort();
    grid.dedup();
    grid.into_iter()
        .map(|v| UnitValue::new(v).unwrap())
        .collect()
}
