use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integration scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// RK4 with step doubling; `tol` bounds the estimated local error (max norm).
    Rk4Adaptive { tol: f64 },
}

/// One RK4 step of size `h`.
pub fn rk4_step<F>(f: &F, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    f(y, &mut k1)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(&tmp, &mut k2)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(&tmp, &mut k3)?;
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(&tmp, &mut k4)?;
    Ok((0..n)
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Raw output of an integration: the sampled times and states, and the
/// error that stopped it early, if any.
pub(crate) struct Run {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub error: Option<Error>,
}

/// Integrates to `T = dt * steps`. Fixed steps record every step; the adaptive
/// scheme records every accepted step and starts from `dt`.
pub(crate) fn run<F>(f: &F, y0: Vec<f64>, dt: f64, steps: usize, scheme: Scheme) -> Run
where
    F: Fn(&[f64], &mut [f64]) -> Result<()>,
{
    let mut out = Run {
        times: vec![0.0],
        states: vec![y0],
        error: None,
    };
    match scheme {
        Scheme::Rk4 => {
            for k in 1..=steps {
                match rk4_step(f, out.states.last().unwrap(), dt) {
                    Ok(y) => {
                        out.times.push(k as f64 * dt);
                        out.states.push(y);
                    }
                    Err(e) => {
                        out.error = Some(e);
                        break;
                    }
                }
            }
        }
        Scheme::Rk4Adaptive { tol } => {
            let t_end = dt * steps as f64;
            let mut t = 0.0;
            let mut h = dt;
            while t < t_end && t_end - t > 1e-14 * t_end {
                h = h.min(t_end - t);
                let y = out.states.last().unwrap();
                let attempt = rk4_step(f, y, h).and_then(|full| {
                    let half = rk4_step(f, y, 0.5 * h)?;
                    let two = rk4_step(f, &half, 0.5 * h)?;
                    let err = full.iter().zip(&two).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / 15.0;
                    Ok((two, err))
                });
                match attempt {
                    Ok((y_new, err)) => {
                        let factor = if err == 0.0 { 2.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0) };
                        if err <= tol {
                            t += h;
                            out.times.push(t);
                            out.states.push(y_new);
                        }
                        h *= factor;
                        if h < 1e-14 * t_end.max(1.0) {
                            out.error = Some(Error::Config(format!("step size underflow at T = {t}")));
                            break;
                        }
                    }
                    Err(e) => {
                        out.error = Some(e);
                        break;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(y: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = -y[0];
        Ok(())
    }

    #[test]
    fn rk4_matches_exponential() {
        let r = run(&decay, vec![1.0], 0.01, 100, Scheme::Rk4);
        let y = r.states.last().unwrap()[0];
        assert!((y - (-1.0f64).exp()).abs() < 1e-9);
        assert_eq!(r.times.len(), 101);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |h: f64| {
            let steps = (1.0 / h).round() as usize;
            let r = run(&decay, vec![1.0], h, steps, Scheme::Rk4);
            (r.states.last().unwrap()[0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((14.0..18.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn adaptive_reaches_end_time() {
        let r = run(&decay, vec![1.0], 0.1, 10, Scheme::Rk4Adaptive { tol: 1e-10 });
        assert!((r.times.last().unwrap() - 1.0).abs() < 1e-12);
        assert!((r.states.last().unwrap()[0] - (-1.0f64).exp()).abs() < 1e-8);
        assert!(r.error.is_none());
    }

    #[test]
    fn singularity_truncates() {
        let blow = |y: &[f64], out: &mut [f64]| {
            if y[0] > 1.5 {
                return Err(Error::Singularity { value: 0.0, threshold: 1e-12 });
            }
            out[0] = 1.0;
            Ok(())
        };
        let r = run(&blow, vec![0.0], 0.1, 100, Scheme::Rk4);
        assert!(r.error.is_some());
        assert!(r.times.len() < 101 && r.times.len() > 10);
    }
}
