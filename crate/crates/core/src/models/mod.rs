//! Built-in models and reference tables.

pub mod fixtures;
pub mod pde;
mod toda;

pub use pde::{build_pde, Equation, PdeModel, PdeSpec};
pub use toda::{build_toda, epsilon, p, q, toda_hamiltonian, toda_symmetry};

use crate::symmetry::PhaseModel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown model `{0}`; expected toda2..toda5, toda:<n> with n >= 2, kdv or mkdv")]
pub struct UnknownModel(pub String);

#[derive(Debug, Clone)]
pub enum Builtin {
    Phase(PhaseModel),
    Pde(PdeSpec),
}

/// Default periodic domain length and grid for the PDE builtins.
pub const PDE_LENGTH: f64 = 80.0;
pub const PDE_GRID: usize = 1024;

pub fn builtin(name: &str) -> Result<Builtin, UnknownModel> {
    let unknown = || UnknownModel(name.to_string());
    let n = match name {
        "kdv" => return Ok(Builtin::Pde(PdeSpec::kdv(PDE_LENGTH, PDE_GRID))),
        "mkdv" => return Ok(Builtin::Pde(PdeSpec::mkdv(PDE_LENGTH, PDE_GRID))),
        "toda2" | "toda3" | "toda4" | "toda5" => {
            name[4..].parse::<usize>().map_err(|_| unknown())?
        }
        _ => name
            .strip_prefix("toda:")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(unknown)?,
    };
    if n < 2 {
        return Err(unknown());
    }
    Ok(Builtin::Phase(build_toda(n)))
}
