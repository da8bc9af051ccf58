//! Scalar numerics: golden-section maximization and adaptive quadrature.

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Shrinks the bracket until it is narrower than `xtol` and returns
/// `(x_max, f_max)`. On a flat stretch the result drifts toward the lower
/// end of the final bracket.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    while (b - a).abs() > xtol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }

    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_section_finds_a_parabola_peak() {
        let (x, fx) = golden_section_max(|x| 1.0 - (x - 0.37).powi(2), 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(x, 0.37, epsilon = 1e-8);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn golden_section_handles_boundary_maxima() {
        let (x, _) = golden_section_max(|x| x, 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn simpson_integrates_smooth_functions() {
        let integral = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert_abs_diff_eq!(integral, 2.0, epsilon = 1e-11);
        let integral = adaptive_simpson(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(integral, 1.0 / 3.0, epsilon = 1e-12);
    }
}
