use serde::Serialize;

use super::fluid::DeterministicPath;
use crate::distributions::{
    falling_factorial, DegreeDistribution, GeneratingFunction, ReducedPgf, TransmissionParams,
};
use crate::error::Result;
use crate::graph::Model;
use crate::quadrature::{integrate, DEFAULT_ABS_TOL, DEFAULT_MAX_INTERVALS};

/// Coefficients of the linear functional that maps fluctuations at time `u`
/// to fluctuations of the final size, along the deterministic path.
#[derive(Debug, Clone)]
pub struct Sensitivity<'a> {
    f: &'a ReducedPgf,
    dist: &'a DegreeDistribution,
    tp: TransmissionParams,
    path: DeterministicPath,
    tau: f64,
    b: f64,
}

impl<'a> Sensitivity<'a> {
    pub fn new(
        dist: &'a DegreeDistribution,
        f: &'a ReducedPgf,
        tp: TransmissionParams,
        z: f64,
    ) -> Self {
        let path = DeterministicPath::new(dist, f, tp);
        let tau = -z.ln();
        let b = path.x_e(tau) / path.a(tau);
        Self {
            f,
            dist,
            tp,
            path,
            tau,
            b,
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn path(&self) -> &DeterministicPath {
        &self.path
    }

    fn w(&self, u: f64) -> f64 {
        (-(self.tau - u)).exp()
    }

    pub fn c_infective(&self, u: f64) -> f64 {
        self.b * self.w(u).powi(2)
    }

    pub fn c_recovered(&self, u: f64) -> f64 {
        let w = self.w(u);
        -self.b * w * (1.0 - w)
    }

    pub fn c_jump(&self, u: f64) -> f64 {
        self.b * self.w(u)
    }

    pub fn c_susceptible(&self, i: usize, u: f64) -> f64 {
        let w = self.w(u);
        let TransmissionParams { p_i: p, q_i: q, .. } = self.tp;
        w.powi(i as i32) + self.b * i as f64 * (w * w - p * w.powi(i as i32) - q * w)
    }

    /// The ten integrands whose sum is the drift-noise contribution.
    pub fn paper_terms(&self, u: f64) -> [f64; 10] {
        let TransmissionParams { p_i: p, q_i: q, q_i2: q2 } = self.tp;
        let (b, tau, f) = (self.b, self.tau, self.f);
        let (ci, cj) = (self.c_infective(u), self.c_jump(u));
        let (xe, ye, ze) = (self.path.x_e(u), self.path.y_e(u), self.path.z_e(u));
        let z = (-tau).exp();
        let s = (-u).exp();
        let r = (-(2.0 * tau - u)).exp();
        let bp = b * p;
        [
            4.0 * ci * ci * (xe + ye + ze),
            (cj * cj - 4.0 * ci * cj) * ze,
            q * (q * cj * cj - 4.0 * ci * cj) * xe,
            cj * cj * p * q * s * s * f.derivative(s, 2),
            cj * cj * (q2 - q * q) * s.powi(3) * f.derivative(s, 3),
            2.0 * (2.0 * ci - q * cj) * (1.0 - bp) * z * f.derivative(z, 1),
            -2.0 * bp * (2.0 * ci - q * cj) * z * z * f.derivative(z, 2),
            (1.0 - bp).powi(2) * r * f.derivative(r, 1),
            -bp * (2.0 - 3.0 * bp) * r * r * f.derivative(r, 2),
            bp * bp * r.powi(3) * f.derivative(r, 3),
        ]
    }

    /// Per-transition form: every jump's squared projection weighted by its rate.
    pub fn direct_integrand(&self, u: f64) -> f64 {
        let TransmissionParams { p_i: p, q_i: q, q_i2: q2 } = self.tp;
        let (ci, cr, cj) = (self.c_infective(u), self.c_recovered(u), self.c_jump(u));
        let w = self.w(u);
        let mut wi = 1.0;
        let mut acc = 0.0;
        for i in 0..=self.path.max_degree() {
            let rate = i as f64 * self.path.x(i, u);
            if rate != 0.0 {
                // projection of an infection is a_i - K c_J, K failed transmissions of i-1
                let a = (p * self.b * i as f64 - 1.0) * wi - 2.0 * ci + i as f64 * q * cj;
                let m = (i as f64 - 1.0).max(0.0);
                let ek = m * q;
                let ek2 = m * (m - 1.0).max(0.0) * q2 + m * q;
                acc += rate * (a * a - 2.0 * a * cj * ek + cj * cj * ek2);
            }
            wi *= w;
        }
        acc + 4.0 * ci * ci * self.path.y_e(u) + (ci + cr).powi(2) * self.path.z_e(u)
    }

    /// Site-percolation analogue: the functional also counts retained
    /// susceptibles that are reached.
    pub fn site_integrand(&self, u: f64) -> f64 {
        let pi = self.tp.p_i;
        let (ci, cr, cj) = (self.c_infective(u), self.c_recovered(u), self.c_jump(u));
        let w = self.w(u);
        let mut wi = 1.0;
        let mut acc = 0.0;
        for i in 0..=self.path.max_degree() {
            let rate = i as f64 * self.path.x(i, u);
            if rate != 0.0 {
                let a = (pi * self.b * i as f64 - 1.0) * wi - 2.0 * ci + i as f64 * (1.0 - pi) * cj;
                let m = (i as f64 - 1.0).max(0.0);
                // deleted vertex: nothing passes on, nothing counted
                let none = -pi * (a - m * cj) - pi;
                // retained vertex: every other half-edge infective, vertex counted
                let all = (1.0 - pi) - pi * a;
                acc += rate * ((1.0 - pi) * none * none + pi * all * all);
            }
            wi *= w;
        }
        let pairs = 4.0 * ci * ci * self.path.y_e(u) + (ci + cr).powi(2) * self.path.z_e(u);
        acc + pi * pi * pairs
    }

    /// Variance contributed by the random initial state.
    pub fn initial_variance(&self, model: Model) -> f64 {
        let TransmissionParams { p_i: p, q_i: q, q_i2: q2 } = self.tp;
        let (ci, cr) = (self.c_infective(0.0), self.c_recovered(0.0));
        let eps_i = self.f.eps_per_degree(self.dist);
        match model {
            Model::MolloyReed => {
                let var_y: f64 = eps_i
                    .iter()
                    .enumerate()
                    .map(|(i, e)| e * transmission_count_var(i, p, q, q2))
                    .sum();
                (ci - cr).powi(2) * var_y
            }
            Model::NewmanStrogatzWatts => {
                let eps = self.f.epsilon();
                let pmf = self.dist.pmf();
                let (mut m1, mut m2) = (0.0, 0.0);
                for (i, pr) in pmf.iter().enumerate() {
                    let c = self.c_susceptible(i, 0.0);
                    m1 += pr * c;
                    m2 += pr * c * c;
                }
                let mut susceptible = (1.0 - eps) * (m2 - m1 * m1);
                if eps > 0.0 {
                    // one initial infective: Y ~ Bin(d, P) to infectives, the rest recovered
                    let (mut e1, mut e2) = (0.0, 0.0);
                    for (d, pr) in pmf.iter().enumerate() {
                        let df = d as f64;
                        let mean_y = p * df;
                        let var_y = transmission_count_var(d, p, q, q2);
                        let m = ci * mean_y + cr * (df - mean_y);
                        e1 += pr * m;
                        e2 += pr * ((ci - cr).powi(2) * var_y + m * m);
                    }
                    susceptible += eps * (e2 - e1 * e1);
                }
                susceptible
            }
        }
    }

    pub fn site_initial_variance(&self, model: Model) -> f64 {
        match model {
            Model::MolloyReed => 0.0,
            Model::NewmanStrogatzWatts => {
                let pi = self.tp.p_i;
                let (mut m1, mut m2) = (0.0, 0.0);
                for (i, pr) in self.dist.pmf().iter().enumerate() {
                    let c = pi * (1.0 - self.c_susceptible(i, 0.0));
                    m1 += pr * c;
                    m2 += pr * c * c;
                }
                m2 - m1 * m1
            }
        }
    }
}

/// Variance of the number of transmissions along `trials` half-edges of one infective.
fn transmission_count_var(trials: usize, p: f64, q: f64, q2: f64) -> f64 {
    falling_factorial(trials, 2) * (q2 - q * q) + trials as f64 * p * q
}

/// Variance assembled from quadrature, next to the parts it was built from.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureVariance {
    pub initial: f64,
    pub integrals: Vec<f64>,
    pub sigma2: f64,
    /// Summed error estimates of the integrals.
    pub error: f64,
}

fn quad<F: Fn(f64) -> f64>(f: F, tau: f64) -> Result<(f64, f64)> {
    let r = integrate(f, 0.0, tau, DEFAULT_ABS_TOL, DEFAULT_MAX_INTERVALS)?;
    Ok((r.value, r.error))
}

/// Epidemic or bond-percolation variance from the ten integrals plus the
/// initial-state term.
pub fn variance_by_quadrature(
    model: Model,
    dist: &DegreeDistribution,
    f: &ReducedPgf,
    tp: TransmissionParams,
    z: f64,
) -> Result<QuadratureVariance> {
    let s = Sensitivity::new(dist, f, tp, z);
    let mut integrals = Vec::with_capacity(10);
    let mut error = 0.0;
    for k in 0..10 {
        let (v, e) = quad(|u| s.paper_terms(u)[k], s.tau())?;
        integrals.push(v);
        error += e;
    }
    let initial = s.initial_variance(model);
    Ok(QuadratureVariance {
        initial,
        sigma2: initial + integrals.iter().sum::<f64>(),
        integrals,
        error,
    })
}

/// The same variance from the per-transition integrand.
pub fn variance_by_quadrature_direct(
    model: Model,
    dist: &DegreeDistribution,
    f: &ReducedPgf,
    tp: TransmissionParams,
    z: f64,
) -> Result<QuadratureVariance> {
    let s = Sensitivity::new(dist, f, tp, z);
    let (v, error) = quad(|u| s.direct_integrand(u), s.tau())?;
    let initial = s.initial_variance(model);
    Ok(QuadratureVariance {
        initial,
        integrals: vec![v],
        sigma2: initial + v,
        error,
    })
}

/// Site-percolation variance with retention `pi`; `z` is the bond root at `pi`.
pub fn site_variance_by_quadrature(
    model: Model,
    dist: &DegreeDistribution,
    pi: f64,
    z: f64,
) -> Result<QuadratureVariance> {
    let f = dist.unreduced();
    let s = Sensitivity::new(dist, &f, TransmissionParams::constant(pi), z);
    let (v, error) = quad(|u| s.site_integrand(u), s.tau())?;
    let initial = s.site_initial_variance(model);
    Ok(QuadratureVariance {
        initial,
        integrals: vec![v],
        sigma2: initial + v,
        error,
    })
}

/// `integral_0^tau 4 c_I^2 eta du` in closed form.
pub fn first_integral_closed_form(b: f64, mu: f64, z: f64) -> f64 {
    2.0 * b * b * mu * z * z * (1.0 - z * z)
}

/// `J_k = integral_{z^2}^{z} s^(k-1) f^(k)(s) ds` by quadrature.
pub fn j_integral(f: &impl GeneratingFunction, z: f64, k: u32) -> Result<f64> {
    let tau = -z.ln();
    let r = integrate(
        |u| {
            let s = (-(2.0 * tau - u)).exp();
            s.powi(k as i32) * f.derivative(s, k)
        },
        0.0,
        tau,
        DEFAULT_ABS_TOL,
        DEFAULT_MAX_INTERVALS,
    )?;
    Ok(r.value)
}

/// `J_k` by repeated integration by parts.
pub fn j_integral_closed_form(f: &impl GeneratingFunction, z: f64, k: u32) -> f64 {
    let z2 = z * z;
    let mut j = f.eval(z) - f.eval(z2);
    for m in 2..=k {
        let e = (m - 1) as i32;
        j = z.powi(e) * f.derivative(z, m - 1) - z2.powi(e) * f.derivative(z2, m - 1)
            - (m - 1) as f64 * j;
    }
    j
}
