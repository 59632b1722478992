//! Closed-form solutions of `b x + c y = v`, `b^2 x + c^2 y = w`.

use crate::error::{Error, Result};
use crate::ff::FieldElement;

use super::{SolutionSet, SystemInstance, Tuple};

/// `x, y != 0` and `x + y != 0`: the pairs with at most two solutions per
/// target.
pub fn is_good_quadratic_pair(x: FieldElement, y: FieldElement) -> bool {
    !x.is_zero() && !y.is_zero() && !(x + y).is_zero()
}

/// `D = (x/y) (w (x + y) - v^2)`; `c = (v ± sqrt D)/(x + y)` when `D` is a square.
///
/// Requires `y != 0`.
pub fn quadratic_discriminant(
    x: FieldElement,
    y: FieldElement,
    v: FieldElement,
    w: FieldElement,
) -> Result<FieldElement> {
    Ok(x.checked_div(y)? * (w * (x + y) - v * v))
}

pub fn solve_quadratic(inst: &SystemInstance) -> Result<SolutionSet> {
    if inst.degree() != 2 || inst.copies() != 2 {
        return Err(Error::Shape(format!(
            "quadratic solver needs n = k = 2, got n = {}, k = {}",
            inst.degree(),
            inst.copies()
        )));
    }
    let m = inst.modulus();
    let (x, y) = (inst.x()[0], inst.x()[1]);
    let (v, w) = (inst.w()[0], inst.w()[1]);
    let two = m.element(2);

    let mut sols: Vec<Tuple> = Vec::new();
    match (x.is_zero(), y.is_zero()) {
        (true, true) => {
            if v.is_zero() && w.is_zero() {
                sols.extend(m.elements().flat_map(|b| m.elements().map(move |c| vec![b, c])));
            }
        }
        // one coefficient vanishes: the other unknown is forced, the free one ranges over F_p
        (false, true) => {
            let b = v / x;
            if b * b * x == w {
                sols.extend(m.elements().map(|c| vec![b, c]));
            }
        }
        (true, false) => {
            let c = v / y;
            if c * c * y == w {
                sols.extend(m.elements().map(|b| vec![b, c]));
            }
        }
        (false, false) if (x + y).is_zero() => {
            // x (b - c) = v and x (b - c)(b + c) = w
            if v.is_zero() {
                if w.is_zero() {
                    sols.extend(m.elements().map(|b| vec![b, b]));
                }
            } else {
                let diff = v / x;
                let sum = w / v;
                let b = (sum + diff) / two;
                let c = (sum - diff) / two;
                sols.push(vec![b, c]);
            }
        }
        (false, false) => {
            let s = x + y;
            let d = quadratic_discriminant(x, y, v, w)?;
            for root in d.sqrt() {
                let c = (v + root) / s;
                let b = v / x - y / x * c;
                sols.push(vec![b, c]);
            }
        }
    }
    debug_assert!(sols.iter().all(|b| inst.is_satisfied_by(b)));
    Ok(SolutionSet::from_unsorted(sols))
}
