//! Constants of the zero-free region for maximum degree `Delta`.

use serde::Serialize;

use super::InterpError;

/// `c` in the closed forms `nu_w = 0.2 c / (2^Delta Delta^7)` and
/// `nu_w = c / (300 Delta^8)`.
pub const C_CLOSED_FORM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigorousConstants {
    pub delta: usize,
    pub uniform: bool,
    pub eps_r: f64,
    pub eps_i: f64,
    pub eps_w: f64,
    pub nu_w: f64,
    pub tau_delta: f64,
    pub tau_prime: f64,
}

/// `eps_R = 0.01/Delta^2`, `eps_I = 0.01 eps_R/Delta^2`, `eps_w = 0.01 eps_I/Delta^3`;
/// `nu_w = 0.2 eps_w / 2^Delta` for general lists and `eps_w / (300 Delta)` for
/// uniformly large lists; `tau_Delta = nu_w^2/8`, `tau' = tau_Delta/sqrt 2`.
pub fn rigorous_constants(delta: usize, uniform: bool) -> Result<RigorousConstants, InterpError> {
    if delta < 1 {
        return Err(InterpError::InvalidArgument("maximum degree must be at least 1".into()));
    }
    let d = delta as f64;
    let eps_r = 0.01 / (d * d);
    let eps_i = eps_r * 0.01 / (d * d);
    let eps_w = eps_i * 0.01 / (d * d * d);
    let nu_w = if uniform {
        eps_w / (300.0 * d)
    } else {
        0.2 * eps_w / (2f64).powi(delta as i32)
    };
    let tau_delta = nu_w * nu_w / 8.0;
    let c = RigorousConstants {
        delta,
        uniform,
        eps_r,
        eps_i,
        eps_w,
        nu_w,
        tau_delta,
        tau_prime: tau_delta / std::f64::consts::SQRT_2,
    };
    let err = c.closed_form_error();
    assert!(err <= 1e-12, "closed forms disagree by {err}");
    Ok(c)
}

impl RigorousConstants {
    /// Closed form of `nu_w` in terms of `c = 10^-6`.
    pub fn nu_w_closed_form(&self) -> f64 {
        let d = self.delta as f64;
        if self.uniform {
            C_CLOSED_FORM / (300.0 * d.powi(8))
        } else {
            0.2 * C_CLOSED_FORM / ((2f64).powi(self.delta as i32) * d.powi(7))
        }
    }

    /// Largest relative deviation from the closed forms of `eps_w` and `nu_w`.
    pub fn closed_form_error(&self) -> f64 {
        let d = self.delta as f64;
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        rel(self.eps_w, C_CLOSED_FORM / d.powi(7)).max(rel(self.nu_w, self.nu_w_closed_form()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_one_general() {
        let c = rigorous_constants(1, false).unwrap();
        assert!((c.eps_r - 0.01).abs() < 1e-18);
        assert!((c.eps_i - 1e-4).abs() < 1e-18);
        assert!((c.eps_w - 1e-6).abs() < 1e-20);
        assert!((c.nu_w - 1e-7).abs() < 1e-21);
        assert!((c.tau_delta - 1.25e-15).abs() < 1e-28);
    }

    #[test]
    fn delta_three_uniform() {
        let c = rigorous_constants(3, true).unwrap();
        assert!((c.eps_w / 4.5725e-10 - 1.0).abs() < 1e-4);
        assert!((c.nu_w / 5.0806e-13 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn closed_forms_hold() {
        for d in 1..=10 {
            for u in [false, true] {
                assert!(rigorous_constants(d, u).unwrap().closed_form_error() <= 1e-12);
            }
        }
        assert!(rigorous_constants(0, false).is_err());
    }
}
