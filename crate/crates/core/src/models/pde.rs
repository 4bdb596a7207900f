//! Periodic finite-difference discretizations of KdV and mKdV with their
//! conserved densities.

use crate::expr::{rat, Compiled, Expr, Rational, Symbols};
use crate::numverify::NumError;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// `u_t + u_xxx + u u_x = 0`.
    Kdv,
    /// `u_t + u_xxx − 6u² u_x = 0`.
    Mkdv,
}

impl Equation {
    pub fn name(self) -> &'static str {
        match self {
            Equation::Kdv => "kdv",
            Equation::Mkdv => "mkdv",
        }
    }
}

/// `weight · ∫ integrand dx`, the integrand being an expression in `u`, `ux`, `uxx`.
#[derive(Debug, Clone)]
pub struct Density {
    pub name: String,
    pub weight: Rational,
    pub integrand: Expr,
}

#[derive(Debug, Clone)]
pub struct PdeSpec {
    pub equation: Equation,
    pub length: f64,
    pub grid: usize,
    pub densities: Vec<Density>,
}

/// Names of the jet variables densities are written in.
pub fn jet_symbols() -> Symbols {
    Symbols::new(["u", "ux", "uxx"])
}

fn density(name: &str, weight: Rational, src: &str) -> Density {
    Density {
        name: name.into(),
        weight,
        integrand: jet_symbols().expr(src),
    }
}

pub fn kdv_densities() -> Vec<Density> {
    vec![
        density("I1", rat(2, 3), "u"),
        density("I2", rat(4, 9), "u^2"),
        density("I3", rat(8, 9), "1/3*u^3 - ux^2"),
        density("I4", rat(64, 45), "5/36*u^4 - 5/3*u*ux^2 + uxx^2"),
    ]
}

pub fn mkdv_densities() -> Vec<Density> {
    vec![
        density("I1", rat(-4, 1), "u^2"),
        density("I2", rat(16, 1), "u^4 + ux^2"),
        density("I3", rat(-32, 1), "2*u^6 + 10*u^2*ux^2 + uxx^2"),
    ]
}

impl PdeSpec {
    pub fn kdv(length: f64, grid: usize) -> PdeSpec {
        PdeSpec {
            equation: Equation::Kdv,
            length,
            grid,
            densities: kdv_densities(),
        }
    }

    pub fn mkdv(length: f64, grid: usize) -> PdeSpec {
        PdeSpec {
            equation: Equation::Mkdv,
            length,
            grid,
            densities: mkdv_densities(),
        }
    }
}

/// A discretized equation on a uniform periodic grid.
#[derive(Debug, Clone)]
pub struct PdeModel {
    spec: PdeSpec,
    dx: f64,
    compiled: Vec<(f64, Compiled)>,
}

pub fn build_pde(spec: &PdeSpec) -> Result<PdeModel, NumError> {
    let n = spec.grid;
    if n < 256 || !n.is_power_of_two() {
        return Err(NumError::BadGrid(format!(
            "{n} grid points; need a power of two of at least 256"
        )));
    }
    if !(spec.length.is_finite() && spec.length > 0.0) {
        return Err(NumError::BadGrid(format!("domain length {}", spec.length)));
    }
    let compiled = spec
        .densities
        .iter()
        .map(|d| (d.weight.to_f64().unwrap_or(f64::NAN), d.integrand.compile()))
        .collect();
    Ok(PdeModel {
        spec: spec.clone(),
        dx: spec.length / n as f64,
        compiled,
    })
}

#[inline]
fn at(u: &[f64], i: usize, k: isize) -> f64 {
    let n = u.len() as isize;
    u[((i as isize + k).rem_euclid(n)) as usize]
}

/// Fourth-order central first derivative.
pub fn d1(u: &[f64], dx: f64) -> Vec<f64> {
    (0..u.len())
        .map(|i| {
            (-at(u, i, 2) + 8.0 * at(u, i, 1) - 8.0 * at(u, i, -1) + at(u, i, -2)) / (12.0 * dx)
        })
        .collect()
}

/// Fourth-order central second derivative.
pub fn d2(u: &[f64], dx: f64) -> Vec<f64> {
    (0..u.len())
        .map(|i| {
            (-at(u, i, 2) + 16.0 * at(u, i, 1) - 30.0 * u[i] + 16.0 * at(u, i, -1) - at(u, i, -2))
                / (12.0 * dx * dx)
        })
        .collect()
}

/// Fourth-order central third derivative.
pub fn d3(u: &[f64], dx: f64) -> Vec<f64> {
    (0..u.len())
        .map(|i| {
            (-at(u, i, 3) + 8.0 * at(u, i, 2) - 13.0 * at(u, i, 1) + 13.0 * at(u, i, -1)
                - 8.0 * at(u, i, -2)
                + at(u, i, -3))
                / (8.0 * dx * dx * dx)
        })
        .collect()
}

impl PdeModel {
    pub fn spec(&self) -> &PdeSpec {
        &self.spec
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.spec.grid).map(|i| i as f64 * self.dx).collect()
    }

    /// `u_t` at the given state. Nonlinear terms use the skew-symmetric
    /// split so the discrete quadratic invariant is preserved.
    pub fn rhs(&self, u: &[f64]) -> Vec<f64> {
        let dx = self.dx;
        let uxxx = d3(u, dx);
        let ux = d1(u, dx);
        match self.spec.equation {
            Equation::Kdv => {
                let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
                let dsq = d1(&sq, dx);
                (0..u.len())
                    .map(|i| -uxxx[i] - (u[i] * ux[i] + dsq[i]) / 3.0)
                    .collect()
            }
            Equation::Mkdv => {
                let cube: Vec<f64> = u.iter().map(|v| v * v * v).collect();
                let dcube = d1(&cube, dx);
                (0..u.len())
                    .map(|i| -uxxx[i] + 1.5 * (u[i] * u[i] * ux[i] + dcube[i]))
                    .collect()
            }
        }
    }

    /// Weighted densities integrated by the periodic rectangle rule.
    pub fn densities(&self, u: &[f64]) -> Vec<f64> {
        let ux = d1(u, self.dx);
        let uxx = d2(u, self.dx);
        self.compiled
            .iter()
            .map(|(w, c)| {
                let mut jet = [0.0; 3];
                let s: f64 = (0..u.len())
                    .map(|i| {
                        jet[0] = u[i];
                        jet[1] = ux[i];
                        jet[2] = uxx[i];
                        c.eval(&jet, 0.0)
                    })
                    .sum();
                w * s * self.dx
            })
            .collect()
    }

    pub fn density_names(&self) -> Vec<String> {
        self.spec.densities.iter().map(|d| d.name.clone()).collect()
    }
}
