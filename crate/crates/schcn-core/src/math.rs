//! Scalar numerical primitives: Q-function, truncated exponential moments,
//! adaptive quadrature over `[0, ∞)` and bracketed root finding.

use crate::Error;

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Gaussian tail probability `Q(x) = P(Z > x)` for a standard normal `Z`.
///
/// Evaluated through the complementary error function, which keeps full
/// relative accuracy deep into the tail (values below 1e-300 are reachable,
/// which the frame-error integrands need).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Truncated exponential moment `g(n, β, x) = ∫₀ˣ tⁿ e^(−βt) dt`
/// in its closed finite-sum form
/// `(n!/βⁿ⁺¹)·[1 − e^(−βx) Σ_{m=0}^{n} (βx)^m/m!]`.
///
/// For `βx` below `n + 1` the bracketed difference cancels badly, so the
/// equivalent lower-incomplete-gamma series is used there instead.
///
/// Supports `n ≤ 50`; panics on larger orders.
pub fn g_lower(n: u32, beta: f64, x: f64) -> f64 {
    assert!(n <= 50, "g_lower supports n <= 50");
    assert!(beta > 0.0, "g_lower requires beta > 0");
    if x <= 0.0 {
        return 0.0;
    }
    let bx = beta * x;
    let scale = factorial(n) / libm::pow(beta, (n + 1) as f64);
    if bx < (n + 1) as f64 {
        scale * reg_lower_gamma_int(n + 1, bx)
    } else {
        let mut sum = 1.0;
        let mut term = 1.0;
        for m in 1..=n {
            term *= bx / m as f64;
            sum += term;
        }
        scale * (1.0 - libm::exp(-bx) * sum)
    }
}

/// Regularized lower incomplete gamma `P(a, x)` for integer `a ≥ 1`,
/// by the ascending series. Converges quickly for `x < a + 1`.
fn reg_lower_gamma_int(a: u32, x: f64) -> f64 {
    let a = a as f64;
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= x / (a + k);
        sum += term;
        if term < sum * 1e-17 || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    // x^a e^{-x} / Γ(a) * sum, with Γ(a) = (a-1)!
    sum * libm::exp(a * libm::log(x) - x - ln_factorial(a as u32 - 1))
}

pub(crate) fn factorial(n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    let mut acc = 0.0;
    for k in 2..=n {
        acc += libm::log(k as f64);
    }
    acc
}

/// Tolerances and budget for the adaptive quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of interval subdivisions before giving up.
    pub max_subdivisions: u32,
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: u32) -> Self {
        assert!(rel_tol > 0.0 && abs_tol >= 0.0 && max_subdivisions >= 1);
        QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-11,
            abs_tol: 1e-30,
            max_subdivisions: 100_000,
        }
    }
}

struct AdaptState<'a, F: Fn(f64) -> f64> {
    f: &'a F,
    budget: u32,
    /// Accumulated error estimate of leaves accepted only because the depth
    /// or subdivision budget ran out (integrable endpoint singularities
    /// leave harmless residue here; genuine failures leave a large one).
    residual: f64,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    st: &mut AdaptState<F>,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if libm::fabs(delta) <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    if depth == 0 || st.budget == 0 {
        st.residual += libm::fabs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    st.budget -= 1;
    adapt(st, a, fa, lm, flm, m, fm, left, 0.5 * eps, depth - 1)
        + adapt(st, m, fm, rm, frm, b, fb, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, Error> {
    if a == b {
        return Ok(0.0);
    }
    // Coarse magnitude estimate with a fixed panel count so the relative
    // tolerance has something to bite on before refinement starts.
    let panels = 32;
    let h = (b - a) / panels as f64;
    let mut rough = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        rough += simpson(f(x0), f(x0 + 0.5 * h), f(x0 + h), h);
    }
    let eps = f64::max(spec.abs_tol, spec.rel_tol * libm::fabs(rough));

    let mut st = AdaptState {
        f: &f,
        budget: spec.max_subdivisions,
        residual: 0.0,
    };
    let mut total = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        let m = 0.5 * (x0 + x1);
        let (fa, fm, fb) = (f(x0), f(m), f(x1));
        let whole = simpson(fa, fm, fb, h);
        total += adapt(&mut st, x0, fa, m, fm, x1, fb, whole, eps / panels as f64, 48);
    }
    if st.residual > f64::max(eps, spec.rel_tol * libm::fabs(total)) {
        Err(Error::NonConvergent)
    } else {
        Ok(total)
    }
}

/// Quadrature of a continuous, eventually-decaying `f` over `[0, ∞)`.
///
/// The upper limit is found by doubling a cutoff until the integrand and a
/// crude tail bound `f(cut)·cut` drop below the tolerances relative to the
/// peak seen so far; the finite piece is then handled by [`integrate`].
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64, Error> {
    let mut cut = 1.0;
    let mut peak = libm::fabs(f(0.0));
    let mut ok = false;
    for _ in 0..1100 {
        let fc = libm::fabs(f(cut));
        let fh = libm::fabs(f(0.71 * cut));
        peak = peak.max(fc).max(fh);
        // Crude tail bound; checking two probe points protects against an
        // accidental zero of the integrand at the cutoff.
        let tol = f64::max(spec.abs_tol, 0.01 * spec.rel_tol * peak);
        if fc * cut <= tol && fh * cut <= tol {
            ok = true;
            break;
        }
        cut *= 2.0;
    }
    if !ok {
        return Err(Error::NonConvergent);
    }
    if peak == 0.0 {
        return Ok(0.0);
    }
    integrate(f, 0.0, cut, spec)
}

/// Root of a continuous `f` on `[lo, hi]` by bisection.
///
/// The endpoints must straddle a sign change. The result is within `tol` of
/// the true root and is invariant under swapping `lo` and `hi`.
pub fn find_root_bracketed<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, Error> {
    assert!(tol > 0.0);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::NoBracket);
    }
    let mut fa = fa;
    for _ in 0..600 {
        let m = 0.5 * (a + b);
        if b - a <= tol || m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
