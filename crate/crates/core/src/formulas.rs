//! Closed-form dimension evaluators.
//!
//! These are the exact values the template constructions are tested
//! against: the singular-set dimension `delta_mn`, the packing-dimension
//! curve `packing_rate`, the k-singular value `fmn_k`, the two explicit
//! `(1,2)` dimension curves, and the exponent correspondence between
//! `omega` and `tau`. Everything representable stays rational; square
//! roots drop to `f64`.

use num_traits::Signed;

use crate::dims::Dims;
use crate::rational::{int, rat, to_f64, Rational};
use crate::{Error, Result};

/// `delta_mn = mn (1 - 1/(m+n))`, the Hausdorff and packing dimension of
/// the singular set (for `(m, n) != (1, 1)`; the formula itself is defined
/// everywhere).
pub fn delta_mn(dims: Dims) -> Rational {
    let mn = int(dims.mn() as i64);
    let d = int(dims.d() as i64);
    &mn * (int(1) - int(1) / d)
}

/// Uniform irrationality exponent, allowing the infinite value.
#[derive(Clone, Debug, PartialEq)]
pub enum Omega {
    Finite(Rational),
    Infinite,
}

/// `tau = (1/n) (omega - n/m) / (omega + 1)`; `omega = oo` maps to `1/n`.
pub fn omega_to_tau(omega: &Omega, dims: Dims) -> Result<Rational> {
    let n = int(dims.n as i64);
    match omega {
        Omega::Infinite => Ok(int(1) / n),
        Omega::Finite(w) => {
            let floor = rat(dims.n as i64, dims.m as i64);
            if *w < floor {
                return Err(Error::Domain(format!(
                    "omega = {w} below the Dirichlet floor n/m = {floor}"
                )));
            }
            Ok((w - floor) / ((w + int(1)) * n))
        }
    }
}

/// Inverse of [`omega_to_tau`]: `omega = (n/m + n tau) / (1 - n tau)`.
pub fn tau_to_omega(tau: &Rational, dims: Dims) -> Result<Omega> {
    let n = int(dims.n as i64);
    let cap = int(1) / &n;
    if tau.is_negative() || tau > &cap {
        return Err(Error::Domain(format!("tau = {tau} outside [0, 1/n]")));
    }
    if tau == &cap {
        return Ok(Omega::Infinite);
    }
    let num = rat(dims.n as i64, dims.m as i64) + &n * tau;
    let den = int(1) - &n * tau;
    Ok(Omega::Finite(num / den))
}

/// The packing-dimension curve
/// `max(mn - m, delta_mn - (mn/(m+n))(d+m) tau, mn - (mn/(m+n)) (1+m tau)/(1 - (mn/(m-1)) tau))`.
///
/// The third branch exists only for `m >= 2` and only left of its pole at
/// `tau = (m-1)/(mn)`; past it the expression is meaningless and excluded
/// from the maximum (it is dominated anyway wherever the first branch
/// applies). For `n = 1` the value is a lower bound rather than an
/// equality.
pub fn packing_rate(dims: Dims, tau: &Rational) -> Result<Rational> {
    let n_cap = rat(1, dims.n as i64);
    if tau.is_negative() || tau > &n_cap {
        return Err(Error::Domain(format!("tau = {tau} outside [0, 1/n]")));
    }
    let (m, n) = (dims.m as i64, dims.n as i64);
    let d = m + n;
    let mn = int(m * n);
    let mut best = &mn - int(m);
    let second = delta_mn(dims) - rat(m * n, d) * rat(d + m, 1) * tau;
    if second > best {
        best = second;
    }
    if m >= 2 {
        let denom = int(1) - rat(m * n, m - 1) * tau;
        if denom.is_positive() {
            let third = &mn - rat(m * n, d) * (int(1) + int(m) * tau) / denom;
            if third > best {
                best = third;
            }
        }
    }
    Ok(best)
}

/// Whether [`packing_rate`] is an equality (`n >= 2`) or only a lower bound
/// (`n = 1`).
pub fn packing_rate_is_exact(dims: Dims) -> bool {
    dims.n >= 2
}

/// `f_mn(k) = mn - k(d-k) mn / d^2 - {km/d} {kn/d}`, the k-singular
/// dimension value, exact.
pub fn fmn_k(dims: Dims, k: usize) -> Result<Rational> {
    let d = dims.d();
    if k == 0 || k >= d {
        return Err(Error::Domain(format!("k = {k} outside [1, d-1]")));
    }
    let (m, n, dd) = (dims.m as i64, dims.n as i64, d as i64);
    let k = k as i64;
    let mn = int(m * n);
    let quad = rat(k * (dd - k) * m * n, dd * dd);
    let frac = crate::rational::fract(&rat(k * m, dd)) * crate::rational::fract(&rat(k * n, dd));
    Ok(&mn - quad - frac)
}

/// Transition point of the `(1,2)` Hausdorff curve: `(3 sqrt 2 - 2) / 14`.
pub const TAU0_12: f64 = (3.0 * std::f64::consts::SQRT_2 - 2.0) / 14.0;

/// Transition point of the `(1,2)` packing curve.
pub const TAU1_12: f64 = 0.125;

/// Hausdorff dimension of the `(1,2)` tau-singular set, `0 < tau < 1/2`.
pub fn hd_sing12(tau: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&tau) || tau <= 0.0 {
        return Err(Error::Domain(format!("tau = {tau} outside (0, 1/2)")));
    }
    if tau <= TAU0_12 {
        let root = (tau - 6.0 * tau.powi(3) + 4.0 * tau.powi(4)).sqrt();
        Ok(4.0 / 3.0 - 4.0 / 3.0 * root - 2.0 * tau + 8.0 / 3.0 * tau * tau)
    } else {
        Ok((1.0 - 2.0 * tau) / (1.0 + tau))
    }
}

/// Packing dimension of the `(1,2)` tau-singular set, `0 < tau < 1/2`.
pub fn pd_sing12(tau: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&tau) || tau <= 0.0 {
        return Err(Error::Domain(format!("tau = {tau} outside (0, 1/2)")));
    }
    Ok(if tau <= TAU1_12 {
        (4.0 - 8.0 * tau) / 3.0
    } else {
        1.0
    })
}

/// Dimension of the set with prescribed proportion of time near infinity:
/// `p delta_mn + (1 - p) mn`.
pub fn avg_singular_rate(dims: Dims, p: &Rational) -> Result<Rational> {
    if p.is_negative() || p > &int(1) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    let mn = int(dims.mn() as i64);
    Ok(p * delta_mn(dims) + (int(1) - p) * mn)
}

/// Hausdorff dimension of the omega-approximable set: `mn (1 - tau)`.
pub fn omega_approx_rate(dims: Dims, tau: &Rational) -> Result<Rational> {
    let cap = rat(1, dims.n as i64);
    if tau.is_negative() || tau > &cap {
        return Err(Error::Domain(format!("tau = {tau} outside [0, 1/n]")));
    }
    Ok(int(dims.mn() as i64) * (int(1) - tau))
}

/// Linear upper envelope for the packing dimension of tau-singular sets
/// near `tau = 0`: `delta_mn - (m^2 n / (m+n)) tau`.
pub fn hsmall_envelope(dims: Dims, tau: &Rational) -> Result<Rational> {
    if tau.is_negative() {
        return Err(Error::Domain(format!("tau = {tau} negative")));
    }
    let (m, n) = (dims.m as i64, dims.n as i64);
    Ok(delta_mn(dims) - rat(m * m * n, m + n) * tau)
}

/// The one-variable family `f_x(y) = (2/3)(-x + (2-7x) y + (3-6x) y^2) /
/// (y + (2+2x) y^2)` whose supremum over `y >= x/(1/2 - x)` equals the
/// `(1,2)` Hausdorff curve.
pub fn fx_curve(x: f64, y: f64) -> f64 {
    let num = -x + (2.0 - 7.0 * x) * y + (3.0 - 6.0 * x) * y * y;
    let den = y + (2.0 + 2.0 * x) * y * y;
    2.0 / 3.0 * num / den
}

/// Exact-rational version of [`fx_curve`].
pub fn fx_curve_exact(x: &Rational, y: &Rational) -> Rational {
    let num = -x + (int(2) - int(7) * x) * y + (int(3) - int(6) * x) * y * y;
    let den = y + (int(2) + int(2) * x) * y * y;
    rat(2, 3) * num / den
}

/// Left endpoint of the `y` domain for [`fx_curve`]: `x / (1/2 - x)`.
pub fn fx_domain_start(x: f64) -> f64 {
    x / (0.5 - x)
}

/// Golden-section search for the maximum of a unimodal (or eventually
/// monotone) function on `[a, b]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Convenience: `delta_mn` as `f64`.
pub fn delta_mn_f64(dims: Dims) -> f64 {
    to_f64(&delta_mn(dims))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: usize, n: usize) -> Dims {
        Dims::new(m, n).unwrap()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_mn(dims(2, 1)), rat(4, 3));
        assert_eq!(delta_mn(dims(1, 1)), rat(1, 2));
        // (m, 1) specializes to m^2/(m+1).
        for m in 1..=6i64 {
            assert_eq!(
                delta_mn(dims(m as usize, 1)),
                rat(m * m, m + 1)
            );
        }
    }

    #[test]
    fn dani_correspondence() {
        let d21 = dims(2, 1);
        // omega = 1 -> tau = 1/4 = (m-1)/(2m) for (2,1).
        assert_eq!(
            omega_to_tau(&Omega::Finite(int(1)), d21).unwrap(),
            rat(1, 4)
        );
        // omega = n/m -> tau = 0.
        assert_eq!(
            omega_to_tau(&Omega::Finite(rat(1, 2)), d21).unwrap(),
            int(0)
        );
        // Infinite omega -> tau = 1/n.
        assert_eq!(
            omega_to_tau(&Omega::Infinite, dims(1, 2)).unwrap(),
            rat(1, 2)
        );
        // Round trip on a grid.
        let d12 = dims(1, 2);
        for k in 0..10 {
            let tau = rat(k, 21);
            let omega = tau_to_omega(&tau, d12).unwrap();
            assert_eq!(omega_to_tau(&omega, d12).unwrap(), tau);
        }
        assert!(matches!(
            tau_to_omega(&rat(1, 2), d12).unwrap(),
            Omega::Infinite
        ));
        // Float check of the (1,2) transition point: omega_0 = 2 + sqrt(2).
        let w0 = 2.0 + std::f64::consts::SQRT_2;
        let tau0 = {
            let n = 2.0;
            (w0 - 2.0) / ((w0 + 1.0) * n)
        };
        assert!((tau0 - TAU0_12).abs() < 1e-14);
    }

    #[test]
    fn packing_curve() {
        // tau = 0 gives delta_mn for a range of shapes.
        for m in 1..=6 {
            for n in 1..=6 {
                let dm = dims(m, n);
                assert_eq!(packing_rate(dm, &int(0)).unwrap(), delta_mn(dm));
            }
        }
        // (1,2): max(1, 4/3 - 8 tau / 3).
        let d12 = dims(1, 2);
        assert_eq!(packing_rate(d12, &rat(1, 16)).unwrap(), rat(7, 6));
        assert_eq!(packing_rate(d12, &rat(1, 8)).unwrap(), int(1));
        assert_eq!(packing_rate(d12, &rat(1, 4)).unwrap(), int(1));
        // Branch transitions: tau_1 = (m^2-d)/(mn(d+m)), tau_2 = m/(n(m+d)),
        // checked for (3,2) where all three branches are active.
        let d32 = dims(3, 2);
        let tau1 = rat(9 - 5, 6 * (5 + 3)); // 1/12
        let tau2 = rat(3, 2 * (3 + 5)); // 3/16
        let at = |t: &Rational| packing_rate(d32, t).unwrap();
        // At tau_1 the second and third branches cross at 4; at tau_2 the
        // first and second cross at mn - m = 3.
        assert_eq!(at(&tau1), int(4));
        assert_eq!(at(&tau2), int(3));
        // Past the third branch's pole at (m-1)/(mn) = 1/3 the curve is the
        // flat branch, not garbage from a negative denominator.
        assert_eq!(at(&rat(5, 12)), int(3));
    }

    #[test]
    fn fmn_symmetries() {
        for m in 1..=6 {
            for n in 1..=6 {
                let dm = dims(m, n);
                let d = dm.d();
                assert_eq!(fmn_k(dm, 1).unwrap(), delta_mn(dm));
                assert_eq!(fmn_k(dm, d - 1).unwrap(), delta_mn(dm));
                for k in 1..d {
                    assert_eq!(fmn_k(dm, k).unwrap(), fmn_k(dm, d - k).unwrap());
                    assert!(fmn_k(dm, k).unwrap() <= delta_mn(dm));
                    if m == 1 || n == 1 {
                        let (kk, dd) = (k as i64, d as i64);
                        assert_eq!(
                            fmn_k(dm, k).unwrap(),
                            int((m * n) as i64) - rat(kk * (dd - kk), dd)
                        );
                    }
                }
            }
        }
        assert!(fmn_k(dims(2, 1), 0).is_err());
        assert!(fmn_k(dims(2, 1), 3).is_err());
    }

    #[test]
    fn sing12_curves() {
        // Limits and special values.
        assert!((hd_sing12(1e-9).unwrap() - 4.0 / 3.0).abs() < 1e-4);
        let hd0 = hd_sing12(TAU0_12).unwrap();
        assert!((hd0 - (2.0 - std::f64::consts::SQRT_2)).abs() < 1e-12);
        // Branch continuity at tau_0.
        let left = {
            let tau = TAU0_12;
            let root = (tau - 6.0 * tau.powi(3) + 4.0 * tau.powi(4)).sqrt();
            4.0 / 3.0 - 4.0 / 3.0 * root - 2.0 * tau + 8.0 / 3.0 * tau * tau
        };
        let right = (1.0 - 2.0 * TAU0_12) / (1.0 + TAU0_12);
        assert!((left - right).abs() < 1e-12);
        // pd agrees with packing_rate for (1,2) across the range.
        let d12 = dims(1, 2);
        for k in 1..100 {
            let tau = rat(k, 200);
            let a = pd_sing12(to_f64(&tau)).unwrap();
            let b = to_f64(&packing_rate(d12, &tau).unwrap());
            assert!((a - b).abs() < 1e-12, "mismatch at tau = {tau}");
        }
        // hd < pd strictly inside the interval.
        for k in 1..50 {
            let tau = k as f64 / 100.0;
            assert!(hd_sing12(tau).unwrap() < pd_sing12(tau).unwrap() + 1e-15);
            if tau > 0.01 && tau < 0.49 {
                assert!(hd_sing12(tau).unwrap() < pd_sing12(tau).unwrap());
            }
        }
    }

    #[test]
    fn misc_rates() {
        assert_eq!(avg_singular_rate(dims(2, 1), &int(1)).unwrap(), rat(4, 3));
        assert_eq!(avg_singular_rate(dims(2, 1), &int(0)).unwrap(), int(2));
        assert_eq!(
            avg_singular_rate(dims(2, 1), &rat(1, 2)).unwrap(),
            rat(5, 3)
        );
        assert_eq!(omega_approx_rate(dims(2, 1), &int(0)).unwrap(), int(2));
        assert_eq!(
            omega_approx_rate(dims(2, 1), &rat(1, 4)).unwrap(),
            rat(3, 2)
        );
        assert_eq!(
            omega_approx_rate(dims(1, 2), &rat(1, 2)).unwrap(),
            int(1)
        );
        assert_eq!(hsmall_envelope(dims(1, 2), &int(0)).unwrap(), rat(4, 3));
        assert_eq!(
            hsmall_envelope(dims(1, 2), &rat(1, 8)).unwrap(),
            rat(4, 3) - rat(2, 3) * rat(1, 8)
        );
    }

    #[test]
    fn fx_maximum_matches_curve() {
        // Numeric 1-D maximization of f_x reproduces the closed form.
        for k in 1..=20 {
            let x = k as f64 / 45.0; // spread over (0, 0.45)
            let lo = fx_domain_start(x).max(1e-6);
            let hi = 1e12;
            let (_, fmax) = golden_section_max(|y| fx_curve(x, y), lo, hi, 300);
            let expected = hd_sing12(x).unwrap();
            assert!(
                (fmax - expected).abs() < 1e-9,
                "x = {x}: optimizer {fmax} vs closed form {expected}"
            );
        }
    }
}
