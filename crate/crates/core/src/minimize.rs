//! Derivative-free one-dimensional minimization: dense grid scan followed by
//! golden-section refinement of the best bracket.

use crate::Real;

/// Point and value of a minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum<T> {
    pub x: T,
    pub value: T,
}

/// Golden-section search for a local minimum of `f` on `[lo, hi]`, stopping
/// once the bracket is narrower than `width`. Returns the best point seen,
/// including the endpoints.
pub fn golden_section<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, width: T) -> Minimum<T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = Minimum { x: a, value: f(a) };
    let fb = f(b);
    if fb < best.value {
        best = Minimum { x: b, value: fb };
    }
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a).abs() > width && iterations < 500 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        iterations += 1;
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.value {
            best = Minimum { x, value: v };
        }
    }
    best
}

/// Evaluates `f` on `points` evenly spaced nodes of `[lo, hi]`, then refines
/// the best node by golden-section search on its neighbouring cells.
/// NaN evaluations are treated as +inf.
pub fn grid_then_golden<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, points: usize, width: T) -> Minimum<T> {
    let points = points.max(2);
    let step = (hi - lo) / T::lit((points - 1) as f64);
    let node = |i: usize| if i + 1 == points { hi } else { lo + step * T::lit(i as f64) };
    let clean = |v: T| if v.is_nan() { T::infinity() } else { v };

    let mut best_i = 0;
    let mut best = Minimum {
        x: lo,
        value: T::infinity(),
    };
    for i in 0..points {
        let x = node(i);
        let v = clean(f(x));
        if v < best.value || i == 0 {
            best_i = i;
            best = Minimum { x, value: v };
        }
    }
    let left = node(best_i.saturating_sub(1));
    let right = node((best_i + 1).min(points - 1));
    let refined = golden_section(|x| clean(f(x)), left, right, width);
    if refined.value < best.value {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section(|x: f64| (x - 1.3).powi(2) + 2.0, -5.0, 5.0, 1e-9);
        assert!((m.x - 1.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_respects_boundary_minimum() {
        let m = golden_section(|x: f64| x, 0.0, 1.0, 1e-9);
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn grid_escapes_local_minimum() {
        // global minimum near x = -1.5 (value ~ -1.1), local one near 1.4
        let f = |x: f64| 0.25 * x.powi(4) - x * x + 0.3 * x;
        let m = grid_then_golden(f, -3.0, 3.0, 801, 1e-10);
        let g = golden_section(f, 0.5, 3.0, 1e-10);
        assert!(m.x < 0.0);
        assert!(m.value < g.value);
        let h = 1e-5;
        let slope = (f(m.x + h) - f(m.x - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-5);
    }

    #[test]
    fn infinite_and_nan_values_are_skipped() {
        let f = |x: f64| if x < 0.0 { f64::NAN } else if x > 2.0 { f64::INFINITY } else { (x - 1.0).powi(2) };
        let m = grid_then_golden(f, -1.0, 3.0, 101, 1e-10);
        assert!((m.x - 1.0).abs() < 1e-6);
    }
}
