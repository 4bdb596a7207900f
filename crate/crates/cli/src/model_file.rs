//! JSON model files: loading with validation, and export of built-in models.

use std::collections::HashSet;

use nonnoether::{Expr, Form, MultiVec, PhaseModel, Symbols};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `W_ij` or `ω_ij` with 1-based `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub expr: String,
}

/// Component `i` (1-based) of a one-form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexEntry {
    pub i: usize,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub poisson: Vec<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symplectic: Option<Vec<PairEntry>>,
    pub hamiltonian: String,
    pub symmetry: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_form: Option<Vec<IndexEntry>>,
    /// Coefficient of `dz_1 ∧ … ∧ dz_dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
}

fn invalid(field: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{}: {msg}", field.into()))
}

fn parse(symbols: &Symbols, field: String, src: &str) -> Result<Expr, CliError> {
    symbols
        .parse(src)
        .map_err(|e| invalid(field, format!("cannot parse `{src}`: {e}")))
}

fn pairs(
    symbols: &Symbols,
    field: &str,
    entries: &[PairEntry],
    dim: usize,
) -> Result<Vec<(usize, usize, Expr)>, CliError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        let at = format!("{field}[{k}]");
        if !(1 <= e.i && e.i < e.j && e.j <= dim) {
            return Err(invalid(
                at,
                format!(
                    "indices ({}, {}) must satisfy 1 <= i < j <= {dim}",
                    e.i, e.j
                ),
            ));
        }
        if !seen.insert((e.i, e.j)) {
            return Err(invalid(at, format!("duplicate entry ({}, {})", e.i, e.j)));
        }
        let x = parse(symbols, format!("{at}.expr"), &e.expr)?;
        out.push((e.i - 1, e.j - 1, x));
    }
    Ok(out)
}

impl ModelFile {
    pub fn from_json(src: &str) -> Result<ModelFile, CliError> {
        serde_json::from_str(src).map_err(|e| CliError::Invalid(format!("model file: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model files serialize");
        s.push('\n');
        s
    }

    /// Builds the model, running the Poisson/symplectic consistency checks.
    pub fn load(&self) -> Result<PhaseModel, CliError> {
        let dim = self.dim;
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(invalid(
                "dim",
                format!("{dim} is not a positive even number"),
            ));
        }
        if self.coords.len() != dim {
            return Err(invalid(
                "coords",
                format!("{} names for dim {dim}", self.coords.len()),
            ));
        }
        let mut names = HashSet::new();
        for (k, c) in self.coords.iter().enumerate() {
            let ok = c
                .chars()
                .next()
                .is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                && c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
                && c != "t"
                && c != "exp";
            if !ok {
                return Err(invalid(
                    format!("coords[{k}]"),
                    format!("`{c}` is not a usable coordinate name"),
                ));
            }
            if !names.insert(c.as_str()) {
                return Err(invalid(
                    format!("coords[{k}]"),
                    format!("`{c}` appears twice"),
                ));
            }
        }
        let symbols = Symbols::new(self.coords.iter().cloned());

        let mut w = MultiVec::zero(dim, 2);
        for (a, b, x) in pairs(&symbols, "poisson", &self.poisson, dim)? {
            w.add_at(&[a, b], x);
        }
        let omega = match &self.symplectic {
            Some(entries) => {
                let mut o = Form::zero(dim, 2);
                for (a, b, x) in pairs(&symbols, "symplectic", entries, dim)? {
                    o.add_at(&[a, b], x);
                }
                Some(o)
            }
            None => None,
        };
        let h = parse(&symbols, "hamiltonian".into(), &self.hamiltonian)?;
        if self.symmetry.len() != dim {
            return Err(invalid(
                "symmetry",
                format!("{} components for dim {dim}", self.symmetry.len()),
            ));
        }
        let comps = self
            .symmetry
            .iter()
            .enumerate()
            .map(|(k, src)| parse(&symbols, format!("symmetry[{k}]"), src))
            .collect::<Result<Vec<_>, _>>()?;
        let e = MultiVec::from_components(comps);

        let mut m = PhaseModel::new(self.name.clone(), symbols.clone(), w, omega, h, e)
            .map_err(|err| invalid("poisson/symplectic", err))?;
        if let Some(entries) = &self.s_form {
            let mut s = Form::zero(dim, 1);
            let mut seen = HashSet::new();
            for (k, en) in entries.iter().enumerate() {
                let at = format!("s_form[{k}]");
                if !(1..=dim).contains(&en.i) {
                    return Err(invalid(
                        at,
                        format!("index {} out of range 1..={dim}", en.i),
                    ));
                }
                if !seen.insert(en.i) {
                    return Err(invalid(at, format!("duplicate index {}", en.i)));
                }
                s.add_at(
                    &[en.i - 1],
                    parse(&symbols, format!("{at}.expr"), &en.expr)?,
                );
            }
            m = m.with_seed(s).map_err(|err| invalid("s_form", err))?;
        }
        if let Some(src) = &self.volume {
            let c = parse(&symbols, "volume".into(), src)?;
            if c.is_zero() {
                return Err(invalid("volume", "the volume coefficient vanishes"));
            }
            let all: Vec<usize> = (0..dim).collect();
            m = m
                .with_volume(Form::monomial(dim, &all, c))
                .map_err(|err| invalid("volume", err))?;
        }
        Ok(m)
    }

    pub fn export(m: &PhaseModel) -> ModelFile {
        let s = m.symbols();
        let show = |e: &Expr| s.show(e).to_string();
        let pair_entries = |it: Vec<(&Vec<usize>, &Expr)>| {
            it.into_iter()
                .map(|(idx, e)| PairEntry {
                    i: idx[0] + 1,
                    j: idx[1] + 1,
                    expr: show(e),
                })
                .collect::<Vec<_>>()
        };
        ModelFile {
            name: m.name().to_string(),
            dim: m.dim(),
            coords: s.names().to_vec(),
            poisson: pair_entries(m.w().iter().collect()),
            symplectic: m.omega().map(|o| pair_entries(o.iter().collect())),
            hamiltonian: show(m.h()),
            symmetry: m.e().components().iter().map(show).collect(),
            s_form: m.seed().map(|f| {
                f.iter()
                    .map(|(idx, e)| IndexEntry {
                        i: idx[0] + 1,
                        expr: show(e),
                    })
                    .collect()
            }),
            volume: m.volume().map(|v| show(&v.coefficient())),
        }
    }
}
