//! Floating-point checks: RK4 trajectories with conserved-quantity monitors,
//! Lax isospectrality, convergence order, and KdV/mKdV drift runs.

use nalgebra::{Complex, DMatrix};

use crate::conslaws::ConservedSet;
use crate::expr::{Compiled, Expr};
use crate::models::pde::{build_pde, PdeSpec};
use crate::operators::LaxPair;
use crate::symmetry::PhaseModel;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("state became non-finite at t = {0}")]
    NonFiniteState(f64),
    #[error("eigenvalue computation failed at t = {0}")]
    EigenSolveFailure(f64),
    #[error("solution norm blew up at t = {0}")]
    Unstable(f64),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("the Hamiltonian depends on time")]
    TimeDependentHamiltonian,
    #[error("invalid step: T = {t_end}, dt = {dt}")]
    BadStep { t_end: f64, dt: f64 },
    #[error("state has dimension {0}, expected {1}")]
    WrongDimension(usize, usize),
}

/// 64-bit linear congruential generator.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Lcg {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn point(&mut self, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..dim).map(|_| self.uniform(lo, hi)).collect()
    }
}

/// `max_t |y(t) − y(0)| / max(|y(0)|, 1)`.
pub fn relative_drift(series: &[f64]) -> f64 {
    let Some(&y0) = series.first() else {
        return 0.0;
    };
    let scale = y0.abs().max(1.0);
    series
        .iter()
        .map(|y| (y - y0).abs() / scale)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub monitors: Vec<(String, Vec<f64>)>,
}

impl Trajectory {
    pub fn end(&self) -> &[f64] {
        self.states.last().expect("trajectories are never empty")
    }

    pub fn drift(&self, name: &str) -> Option<f64> {
        self.monitors
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| relative_drift(s))
    }

    pub fn drifts(&self) -> Vec<(String, f64)> {
        self.monitors
            .iter()
            .map(|(n, s)| (n.clone(), relative_drift(s)))
            .collect()
    }
}

fn rk4_step(f: &dyn Fn(&[f64], f64) -> Vec<f64>, z: &[f64], t: f64, h: f64) -> Vec<f64> {
    let axpy = |a: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        a.iter().zip(k).map(|(x, y)| x + s * y).collect()
    };
    let k1 = f(z, t);
    let k2 = f(&axpy(z, &k1, h / 2.0), t + h / 2.0);
    let k3 = f(&axpy(z, &k2, h / 2.0), t + h / 2.0);
    let k4 = f(&axpy(z, &k3, h), t + h);
    (0..z.len())
        .map(|i| z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Number of steps and the adjusted step landing exactly on `t_end`.
fn step_plan(t_end: f64, dt: f64) -> Result<(usize, f64), NumError> {
    if !(dt.is_finite() && dt > 0.0 && t_end.is_finite() && t_end >= 0.0) {
        return Err(NumError::BadStep { t_end, dt });
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    Ok((
        steps,
        if steps == 0 {
            0.0
        } else {
            t_end / steps as f64
        },
    ))
}

/// Classical RK4 on `ż = X_h(z)`. Monitors are evaluated at every recorded
/// sample; states are kept every `stride` steps and at the end.
pub fn integrate_hamiltonian(
    m: &PhaseModel,
    start: &[f64],
    t_end: f64,
    dt: f64,
    monitors: &[(String, Expr)],
    stride: usize,
) -> Result<Trajectory, NumError> {
    if m.h().depends_on_time() {
        return Err(NumError::TimeDependentHamiltonian);
    }
    if start.len() != m.dim() {
        return Err(NumError::WrongDimension(start.len(), m.dim()));
    }
    let (steps, h) = step_plan(t_end, dt)?;
    let field: Vec<Compiled> = m.flow().components().iter().map(Expr::compile).collect();
    let rhs = |z: &[f64], t: f64| -> Vec<f64> { field.iter().map(|c| c.eval(z, t)).collect() };
    let compiled: Vec<Compiled> = monitors.iter().map(|(_, e)| e.compile()).collect();
    let mut series: Vec<Vec<f64>> = vec![Vec::new(); monitors.len()];
    let record = |series: &mut Vec<Vec<f64>>, z: &[f64], t: f64| {
        for (s, c) in series.iter_mut().zip(&compiled) {
            s.push(c.eval(z, t));
        }
    };

    let stride = stride.max(1);
    let mut z = start.to_vec();
    let mut times = vec![0.0];
    let mut states = vec![z.clone()];
    record(&mut series, &z, 0.0);
    for k in 1..=steps {
        let t = (k - 1) as f64 * h;
        z = rk4_step(&rhs, &z, t, h);
        let t = k as f64 * h;
        if z.iter().any(|x| !x.is_finite()) {
            return Err(NumError::NonFiniteState(t));
        }
        if k % stride == 0 || k == steps {
            times.push(t);
            states.push(z.clone());
            record(&mut series, &z, t);
        }
    }
    let monitors = monitors
        .iter()
        .map(|(n, _)| n.clone())
        .zip(series)
        .collect();
    Ok(Trajectory {
        times,
        states,
        monitors,
    })
}

/// Y, C and I laws of a conserved set as named monitors, plus `h`.
pub fn standard_monitors(m: &PhaseModel, set: &ConservedSet) -> Vec<(String, Expr)> {
    let mut out = vec![("h".to_string(), m.h().clone())];
    for (k, y) in set.y.iter().enumerate() {
        out.push((format!("Y{}", k + 1), y.clone()));
    }
    for (k, i) in set.i.iter().enumerate() {
        out.push((format!("I{}", k + 1), i.clone()));
    }
    out
}

fn eigenvalues(l: &[Vec<Compiled>], z: &[f64], t: f64) -> Result<Vec<Complex<f64>>, NumError> {
    let dim = l.len();
    let mat = DMatrix::from_fn(dim, dim, |a, b| l[a][b].eval(z, t));
    if mat.iter().any(|x| !x.is_finite()) {
        return Err(NumError::EigenSolveFailure(t));
    }
    let eig = crate::conslaws::eigenvalues(mat).ok_or(NumError::EigenSolveFailure(t))?;
    if eig.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(NumError::EigenSolveFailure(t));
    }
    Ok(eig)
}

/// Greedy nearest-neighbour order of `next` following `prev`; ties go to the
/// lower index.
fn continue_spectrum(prev: &[Complex<f64>], next: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let mut used = vec![false; next.len()];
    prev.iter()
        .map(|p| {
            let mut best = usize::MAX;
            let mut dist = f64::INFINITY;
            for (j, c) in next.iter().enumerate() {
                let d = (c - p).norm();
                if !used[j] && d < dist {
                    best = j;
                    dist = d;
                }
            }
            used[best] = true;
            next[best]
        })
        .collect()
}

/// Largest change of any eigenvalue of `L` along the trajectory.
pub fn isospectral_check(lp: &LaxPair, traj: &Trajectory) -> Result<f64, NumError> {
    let l: Vec<Vec<Compiled>> =
        lp.l.rows()
            .iter()
            .map(|r| r.iter().map(Expr::compile).collect())
            .collect();
    let mut first = eigenvalues(&l, &traj.states[0], traj.times[0])?;
    first.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut prev = first.clone();
    let mut worst: f64 = 0.0;
    for (z, &t) in traj.states.iter().zip(&traj.times).skip(1) {
        let cur = continue_spectrum(&prev, &eigenvalues(&l, z, t)?);
        for (a, b) in first.iter().zip(&cur) {
            worst = worst.max((a - b).norm());
        }
        prev = cur;
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    /// Max-norm endpoint error against a run at `dt_min / 16`.
    pub errors: Vec<f64>,
    /// `log2(e_k / e_{k+1})` for consecutive halvings.
    pub pairwise: Vec<f64>,
    /// Least-squares slope of `log e` against `log dt`.
    pub order: f64,
}

pub fn convergence_order(
    m: &PhaseModel,
    start: &[f64],
    t_end: f64,
    dts: &[f64],
) -> Result<ConvergenceReport, NumError> {
    let dt_min = dts.iter().copied().fold(f64::INFINITY, f64::min);
    let reference = integrate_hamiltonian(m, start, t_end, dt_min / 16.0, &[], usize::MAX)?;
    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let run = integrate_hamiltonian(m, start, t_end, dt, &[], usize::MAX)?;
        let err = run
            .end()
            .iter()
            .zip(reference.end())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    let pairwise = errors
        .windows(2)
        .zip(dts.windows(2))
        .map(|(e, d)| (e[0] / e[1]).ln() / (d[0] / d[1]).ln())
        .collect();
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ConvergenceReport {
        dts: dts.to_vec(),
        errors,
        pairwise,
        order: sxy / sxx,
    })
}

/// Gradients `∂c_i/∂z` of the secular roots at `z`, from the exact
/// gradients of the elementary symmetric laws `C^(k)`.
pub fn root_gradients(
    m: &PhaseModel,
    c: &[Expr],
    roots: &[f64],
    z: &[f64],
    t: f64,
) -> Vec<Vec<f64>> {
    let n = c.len();
    let dc: Vec<Vec<f64>> = c
        .iter()
        .map(|ck| (0..m.dim()).map(|a| ck.d(a).compile().eval(z, t)).collect())
        .collect();
    roots
        .iter()
        .map(|&x| {
            // P(x) = Σ_k (−1)^k C^(k) x^{n−k}, C^(0) = 1.
            let mut dp_dx = n as f64 * x.powi(n as i32 - 1);
            for k in 1..n {
                let e = c[k - 1].compile().eval(z, t);
                dp_dx += (-1f64).powi(k as i32) * e * (n - k) as f64 * x.powi((n - k) as i32 - 1);
            }
            (0..m.dim())
                .map(|a| {
                    let dp_da: f64 = (1..=n)
                        .map(|k| (-1f64).powi(k as i32) * dc[k - 1][a] * x.powi((n - k) as i32))
                        .sum();
                    -dp_da / dp_dx
                })
                .collect()
        })
        .collect()
}

/// Largest `|{c_i, c_j}|` over the given points.
pub fn secular_bracket_max(m: &PhaseModel, c: &[Expr], points: &[Vec<f64>], t: f64) -> f64 {
    let w = m.w().matrix();
    let wn: Vec<Vec<f64>> = w
        .iter()
        .map(|r| r.iter().map(|e| e.compile().eval(&[], t)).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for z in points {
        let wz: Vec<Vec<f64>> = if m.w().iter().all(|(_, e)| e.max_coord().is_none()) {
            wn.clone()
        } else {
            w.iter()
                .map(|r| r.iter().map(|e| e.compile().eval(z, t)).collect())
                .collect()
        };
        let roots = crate::conslaws::secular_roots(m, z, t).real();
        let g = root_gradients(m, c, &roots, z, t);
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let mut b = 0.0;
                for (a, row) in wz.iter().enumerate() {
                    for (bb, wab) in row.iter().enumerate() {
                        b += wab * g[i][a] * g[j][bb];
                    }
                }
                worst = worst.max(b.abs());
            }
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct PdeReport {
    pub equation: &'static str,
    pub grid: usize,
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub names: Vec<String>,
    pub initial: Vec<f64>,
    pub last: Vec<f64>,
    /// Max relative drift per density over the sampled times.
    pub drifts: Vec<f64>,
    /// Discrete L2 distance to the exact solution at `T`, when one is given.
    pub shape_error: Option<f64>,
}

/// The step used when none is given: `0.2 Δx³`.
pub fn default_pde_dt(spec: &PdeSpec) -> f64 {
    let dx = spec.length / spec.grid as f64;
    0.2 * dx * dx * dx
}

/// RK4 in time on the discretized equation, sampling densities `samples`
/// times. `exact(x, t)`, if given, is compared with the state at `T`.
pub fn pde_run(
    spec: &PdeSpec,
    u0: &dyn Fn(f64) -> f64,
    t_end: f64,
    dt: Option<f64>,
    samples: usize,
    exact: Option<&dyn Fn(f64, f64) -> f64>,
) -> Result<PdeReport, NumError> {
    let model = build_pde(spec)?;
    let xs = model.points();
    let dt = dt.unwrap_or_else(|| default_pde_dt(spec));
    let (steps, h) = step_plan(t_end, dt)?;
    let mut u: Vec<f64> = xs.iter().map(|&x| u0(x)).collect();
    let bound = 1e6 * (1.0 + u.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    let rhs = |v: &[f64], _t: f64| model.rhs(v);
    let every = (steps / samples.max(1)).max(1);

    let initial = model.densities(&u);
    let mut series: Vec<Vec<f64>> = initial.iter().map(|&v| vec![v]).collect();
    for k in 1..=steps {
        u = rk4_step(&rhs, &u, (k - 1) as f64 * h, h);
        let t = k as f64 * h;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(NumError::NonFiniteState(t));
        }
        if u.iter().any(|v| v.abs() > bound) {
            return Err(NumError::Unstable(t));
        }
        if k % every == 0 || k == steps {
            for (s, v) in series.iter_mut().zip(model.densities(&u)) {
                s.push(v);
            }
        }
    }
    let shape_error = exact.map(|f| {
        let sq: f64 = xs
            .iter()
            .zip(&u)
            .map(|(&x, v)| (v - f(x, t_end)).powi(2))
            .sum();
        (sq * model.dx()).sqrt()
    });
    Ok(PdeReport {
        equation: spec.equation.name(),
        grid: spec.grid,
        dx: model.dx(),
        dt: h,
        steps,
        names: model.density_names(),
        last: series.iter().map(|s| *s.last().unwrap()).collect(),
        drifts: series.iter().map(|s| relative_drift(s)).collect(),
        initial,
        shape_error,
    })
}

/// `12κ² sech²(κ(x − x0 − 4κ²t))`, wrapped onto the periodic domain.
pub fn kdv_soliton(kappa: f64, x0: f64, length: f64) -> impl Fn(f64, f64) -> f64 {
    move |x, t| {
        let xi =
            (x - x0 - 4.0 * kappa * kappa * t + length / 2.0).rem_euclid(length) - length / 2.0;
        12.0 * kappa * kappa / (kappa * xi).cosh().powi(2)
    }
}

/// `a sech(k(x − x0))`.
pub fn sech_profile(a: f64, k: f64, x0: f64) -> impl Fn(f64) -> f64 {
    move |x| a / (k * (x - x0)).cosh()
}
