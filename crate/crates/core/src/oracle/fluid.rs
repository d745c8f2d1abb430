use serde::Serialize;

use crate::distributions::{DegreeDistribution, GeneratingFunction, ReducedPgf, TransmissionParams};

/// Deterministic limit of the scaled jump chain, evaluated from its closed-form solution.
#[derive(Debug, Clone)]
pub struct DeterministicPath {
    x0: Vec<f64>,
    y0: f64,
    z0: f64,
    p_i: f64,
    q_i: f64,
}

impl DeterministicPath {
    /// Starts from `x_i(0) = p_i - eps_i`, `y_E(0) = p_I eps_E`, `z_E(0) = q_I eps_E`
    /// with `eps_E = sum i eps_i`.
    pub fn new(dist: &DegreeDistribution, f: &ReducedPgf, tp: TransmissionParams) -> Self {
        let x0 = f.coefficients().to_vec();
        let eps_e: f64 = dist
            .pmf()
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 * (p - x0.get(i).copied().unwrap_or(0.0)))
            .sum();
        Self::from_state(x0, tp.p_i * eps_e, tp.q_i * eps_e, tp)
    }

    pub fn from_state(x0: Vec<f64>, y0: f64, z0: f64, tp: TransmissionParams) -> Self {
        Self {
            x0,
            y0,
            z0,
            p_i: tp.p_i,
            q_i: tp.q_i,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.x0.len() - 1
    }

    pub fn x(&self, i: usize, t: f64) -> f64 {
        self.x0[i] * (-(i as f64) * t).exp()
    }

    /// `sum_i i_[k] x_i(t)`.
    fn factorial_moment(&self, t: f64, k: u32) -> f64 {
        let w = (-t).exp();
        let mut wi = 1.0;
        let mut acc = 0.0;
        for (i, &x) in self.x0.iter().enumerate() {
            acc += crate::distributions::falling_factorial(i, k) * x * wi;
            wi *= w;
        }
        acc
    }

    pub fn x_e(&self, t: f64) -> f64 {
        self.factorial_moment(t, 1)
    }

    pub fn y_e(&self, t: f64) -> f64 {
        let xe0 = self.x_e(0.0);
        (xe0 + self.y0 + self.z0) * (-2.0 * t).exp()
            - (self.z0 + self.q_i * xe0) * (-t).exp()
            - self.p_i * self.x_e(t)
    }

    pub fn z_e(&self, t: f64) -> f64 {
        (self.z0 + self.q_i * self.x_e(0.0)) * (-t).exp() - self.q_i * self.x_e(t)
    }

    pub fn eta(&self, t: f64) -> f64 {
        self.x_e(t) + self.y_e(t) + self.z_e(t)
    }

    /// Drift of `y_E` at time `t`: `sum i x_i [(i-1) p_I - 1] - 2 y_E - z_E`.
    pub fn a(&self, t: f64) -> f64 {
        self.p_i * self.factorial_moment(t, 2) - self.x_e(t) - 2.0 * self.y_e(t) - self.z_e(t)
    }

    /// Right-hand side of the ODE for the state `[x_0, ..., x_dmax, y_E, z_E]`.
    pub fn drift(&self, state: &[f64]) -> Vec<f64> {
        let d = self.max_degree();
        let mut out = vec![0.0; d + 3];
        let mut x_e = 0.0;
        let mut second = 0.0;
        for i in 0..=d {
            let x = state[i];
            out[i] = -(i as f64) * x;
            x_e += i as f64 * x;
            second += (i * i.saturating_sub(1)) as f64 * x;
        }
        let (y, z) = (state[d + 1], state[d + 2]);
        out[d + 1] = self.p_i * second - x_e - 2.0 * y - z;
        out[d + 2] = self.q_i * second - z;
        out
    }

    pub fn initial_state(&self) -> Vec<f64> {
        let mut s = self.x0.clone();
        s.push(self.y0);
        s.push(self.z0);
        s
    }
}

/// Agreement between a Runge–Kutta integration of the ODE and the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluidReport {
    pub tau: f64,
    /// Largest absolute gap over all components at the sample points.
    pub max_deviation: f64,
    /// `|eta(tau/2) / eta(0) - e^(-tau)|`.
    pub eta_error: f64,
    pub y_at_tau: f64,
    pub a_at_tau: f64,
}

impl FluidReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
            && self.eta_error <= 1e-10
            && self.y_at_tau.abs() <= 1e-10
            && self.a_at_tau < 0.0
    }
}

/// Integrates the fluid ODE over `[0, tau]` with `tau = -ln z` and compares
/// against the closed forms at 100 evenly spaced points.
pub fn fluid_consistency_check(
    dist: &DegreeDistribution,
    f: &ReducedPgf,
    tp: TransmissionParams,
    z: f64,
) -> FluidReport {
    let path = DeterministicPath::new(dist, f, tp);
    let tau = -z.ln();
    let samples = 100;
    let steps_per_sample = 200;
    let h = tau / (samples * steps_per_sample) as f64;
    let d = path.max_degree();
    let mut state = path.initial_state();
    let mut max_deviation: f64 = 0.0;
    for s in 1..=samples {
        for _ in 0..steps_per_sample {
            state = rk4_step(&path, &state, h);
        }
        let t = tau * s as f64 / samples as f64;
        for i in 0..=d {
            max_deviation = max_deviation.max((state[i] - path.x(i, t)).abs());
        }
        max_deviation = max_deviation
            .max((state[d + 1] - path.y_e(t)).abs())
            .max((state[d + 2] - path.z_e(t)).abs());
    }
    FluidReport {
        tau,
        max_deviation,
        eta_error: (path.eta(tau / 2.0) / path.eta(0.0) - (-tau).exp()).abs(),
        y_at_tau: path.y_e(tau),
        a_at_tau: path.a(tau),
    }
}

fn rk4_step(path: &DeterministicPath, s: &[f64], h: f64) -> Vec<f64> {
    let axpy = |a: &[f64], k: &[f64], c: f64| -> Vec<f64> {
        a.iter().zip(k).map(|(x, d)| x + c * d).collect()
    };
    let k1 = path.drift(s);
    let k2 = path.drift(&axpy(s, &k1, h / 2.0));
    let k3 = path.drift(&axpy(s, &k2, h / 2.0));
    let k4 = path.drift(&axpy(s, &k3, h));
    s.iter()
        .enumerate()
        .map(|(j, x)| x + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
        .collect()
}
