use std::fs;
use std::path::Path;

use nonnoether::conslaws::{
    c_and_i_laws, elementary_symmetric, involutivity_symbolic, secular_roots, y_laws, ConservedSet,
    NumericBracket,
};
use nonnoether::models::fixtures::run_fixtures;
use nonnoether::models::{builtin, Builtin, PdeSpec};
use nonnoether::numverify::{
    convergence_order, integrate_hamiltonian, isospectral_check, kdv_soliton, pde_run,
    sech_profile, secular_bracket_max, standard_monitors, Lcg, NumError,
};
use nonnoether::operators::{
    bicomplex_verify, dbar, fn_invariance, fn_operator, fn_torsion, lax_pair, lax_residual,
    recursion_check,
};
use nonnoether::symmetry::{check_bihamiltonian, check_symmetry, hojman_invariant, orbit_family};
use nonnoether::{Expr, Form, MultiVec, PhaseModel, Tensor11};
use serde_json::Value;

use crate::model_file::ModelFile;
use crate::report::Report;
use crate::{CliError, Command, Family, Options};

const DEFAULT_TOL: f64 = 1e-8;
const LAX_TOL: f64 = 1e-6;
const ORDER_WINDOW: (f64, f64) = (3.7, 4.3);
const DT_LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Runs a command; `Ok(true)` when every check passed.
pub fn run(cmd: &Command, opts: &Options) -> Result<bool, CliError> {
    if let Command::Fixtures { filter } = cmd {
        return emit(fixtures(filter, opts)?, opts);
    }
    let source = load(opts)?;
    if let Command::ExportModel { out } = cmd {
        let m = phase(source, "export-model")?;
        let text = ModelFile::export(&m).to_json();
        match out {
            Some(path) => write(path, &text)?,
            None => print!("{text}"),
        }
        return Ok(true);
    }
    let report = match cmd {
        Command::Pde { kappa } => match source {
            Builtin::Pde(spec) => pde(spec, *kappa, opts)?,
            Builtin::Phase(_) => {
                return Err(CliError::Invalid("pde needs --model kdv or mkdv".into()))
            }
        },
        other => {
            let m = phase(source, "this command")?;
            match other {
                Command::Symcheck => symcheck(&m, opts),
                Command::Conslaws { family, count } => conslaws(&m, *family, *count, opts)?,
                Command::Lax => lax(&m, opts)?,
                Command::Bidiff => bidiff(&m, opts)?,
                Command::Fnop => fnop(&m, opts)?,
                Command::Orbit { j, depth } => orbit(&m, j.as_deref(), *depth, opts)?,
                Command::Hojman { depth } => hojman(&m, *depth, opts)?,
                Command::Numverify { start, convergence } => {
                    numverify(&m, start.as_deref(), *convergence, opts)?
                }
                Command::Pde { .. } | Command::ExportModel { .. } | Command::Fixtures { .. } => {
                    unreachable!("handled above")
                }
            }
        }
    };
    emit(report, opts)
}

fn emit(report: Report, opts: &Options) -> Result<bool, CliError> {
    match &opts.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            write(p, &report.to_json())?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    Ok(report.passed())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(opts: &Options) -> Result<Builtin, CliError> {
    match (&opts.model, &opts.file) {
        (Some(name), None) => builtin(name).map_err(|e| CliError::Invalid(format!("--model: {e}"))),
        (None, Some(path)) => {
            let src = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(Builtin::Phase(ModelFile::from_json(&src)?.load()?))
        }
        _ => Err(CliError::Invalid(
            "give exactly one of --model or --file".into(),
        )),
    }
}

fn phase(source: Builtin, what: &str) -> Result<PhaseModel, CliError> {
    match source {
        Builtin::Phase(m) => Ok(m),
        Builtin::Pde(spec) => Err(CliError::Invalid(format!(
            "{what} needs a phase-space model, not {}",
            spec.equation.name()
        ))),
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn start(m: &PhaseModel, name: &str, opts: &Options) -> Report {
    let mut r = Report::new(name, m.name(), opts.seed);
    r.option("dim", m.dim());
    r
}

fn show(m: &PhaseModel, e: &Expr) -> String {
    m.symbols().show(e).to_string()
}

fn mv_residual(m: &PhaseModel, v: &MultiVec) -> Vec<String> {
    if v.is_zero() {
        Vec::new()
    } else {
        vec![v.display(m.symbols()).to_string()]
    }
}

fn form_residual(m: &PhaseModel, label: &str, f: &Form) -> Option<String> {
    (!f.is_zero()).then(|| format!("{label}: {}", f.display(m.symbols())))
}

fn tensor_residual(m: &PhaseModel, t: &Tensor11) -> Vec<String> {
    let mut out = Vec::new();
    for (a, row) in t.rows().iter().enumerate() {
        for (b, e) in row.iter().enumerate() {
            if !e.is_zero() {
                out.push(format!("({}, {}): {}", a + 1, b + 1, show(m, e)));
            }
        }
    }
    out
}

fn matrix_lines(m: &PhaseModel, t: &Tensor11) -> Vec<String> {
    t.rows()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|e| show(m, e)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect()
}

fn sample_points(m: &PhaseModel, opts: &Options) -> Vec<Vec<f64>> {
    let mut rng = Lcg::new(opts.seed);
    (0..opts.points)
        .map(|_| rng.point(m.dim(), -1.0, 1.0))
        .collect()
}

fn symcheck(m: &PhaseModel, opts: &Options) -> Report {
    let mut r = start(m, "symcheck", opts);
    let sym = check_symmetry(m);
    let res = |name: &str| {
        sym.residual(name)
            .cloned()
            .unwrap_or_else(|| MultiVec::zero(m.dim(), 2))
    };
    r.exact("symmetry", mv_residual(m, &res("symmetry")));
    r.exact("yang_baxter", mv_residual(m, &res("yang_baxter")));
    let bh = check_bihamiltonian(m);
    r.exact("[W, W] = 0", mv_residual(m, &bh.w_w));
    r.exact("[W^, W] = 0", mv_residual(m, &bh.what_w));
    r.exact("[W^, W^] = 0", mv_residual(m, &bh.what_what));
    r.flag("W^n nonzero", !bh.w_top.is_zero(), "");
    r.value("is_symmetry", sym.is_symmetry);
    r.value("is_noether", sym.is_noether);
    r.value("yang_baxter", sym.yang_baxter);
    r.value("[E, W]", m.e_bracket_w().display(m.symbols()).to_string());
    r.value("W^", m.second_bivector().display(m.symbols()).to_string());
    r
}

fn law_checks(m: &PhaseModel, r: &mut Report, prefix: &str, laws: &[Expr]) {
    for (k, f) in laws.iter().enumerate() {
        let d = m.total_dt(f);
        let res = if d.is_zero() {
            Vec::new()
        } else {
            vec![show(m, &d)]
        };
        r.exact(format!("{prefix}{} conserved", k + 1), res);
    }
    let brackets = involutivity_symbolic(m, laws);
    let mut res = Vec::new();
    for (a, row) in brackets.iter().enumerate() {
        for (b, e) in row.iter().enumerate().skip(a + 1) {
            if !e.is_zero() {
                res.push(format!(
                    "{{{prefix}{}, {prefix}{}}} = {}",
                    a + 1,
                    b + 1,
                    show(m, e)
                ));
            }
        }
    }
    r.exact("in involution", res);
    r.lines(
        "laws",
        laws.iter()
            .enumerate()
            .map(|(k, f)| format!("{prefix}{} = {}", k + 1, show(m, f)))
            .collect(),
    );
}

fn conslaws(
    m: &PhaseModel,
    family: Family,
    count: Option<usize>,
    opts: &Options,
) -> Result<Report, CliError> {
    let mut r = start(m, "conslaws", opts);
    let n = m.n();
    match family {
        Family::Y => {
            r.option("family", "Y");
            let ys = y_laws(m).map_err(invalid)?;
            law_checks(m, &mut r, "Y", &ys);
        }
        Family::C => {
            r.option("family", "C");
            let (c, _) = c_and_i_laws(m, 0).map_err(invalid)?;
            law_checks(m, &mut r, "C", &c);
        }
        Family::I => {
            let k = count.unwrap_or(n);
            r.option("family", "I");
            r.option("count", k);
            let (_, i) = c_and_i_laws(m, k).map_err(invalid)?;
            law_checks(m, &mut r, "I", &i);
        }
        Family::Roots => {
            let tol = opts.tol.unwrap_or(DEFAULT_TOL);
            r.option("family", "roots");
            r.option("points", opts.points);
            r.option("tol", tol);
            let (c, _) = c_and_i_laws(m, 0).map_err(invalid)?;
            let compiled: Vec<_> = c.iter().map(Expr::compile).collect();
            let points = sample_points(m, opts);
            let mut rows = Vec::with_capacity(points.len());
            let mut worst: f64 = 0.0;
            let mut complex = 0;
            for (p, z) in points.iter().enumerate() {
                let sr = secular_roots(m, z, 0.0);
                complex += usize::from(sr.complex || sr.pairing_warning);
                let roots = sr.real();
                for (k, e) in elementary_symmetric(&roots).iter().enumerate() {
                    let ck = compiled[k].eval(z, 0.0);
                    worst = worst.max((e - ck).abs() / ck.abs().max(1.0));
                }
                let mut row = vec![Value::from(p + 1)];
                row.extend(roots.iter().map(|&x| Value::from(x)));
                rows.push(row);
            }
            r.bound("roots reproduce C(k)", worst, tol);
            r.bound(
                "root brackets",
                secular_bracket_max(m, &c, &points, 0.0),
                tol,
            );
            r.value("points with complex or unpaired roots", complex);
            let mut cols = vec!["point".to_string()];
            cols.extend((1..=n).map(|k| format!("c{k}")));
            let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
            r.table("secular roots", &cols, rows);
        }
    }
    Ok(r)
}

fn lax(m: &PhaseModel, opts: &Options) -> Result<Report, CliError> {
    let mut r = start(m, "lax", opts);
    let lp = lax_pair(m).map_err(invalid)?;
    r.exact("dL/dt = [L, P]", tensor_residual(m, &lax_residual(m, &lp)));
    r.value("L nonzero entries", lp.l.nonzero_count());
    r.value("P nonzero entries", lp.p.nonzero_count());
    r.lines("L", matrix_lines(m, &lp.l));
    r.lines("P", matrix_lines(m, &lp.p));
    Ok(r)
}

fn bidiff(m: &PhaseModel, opts: &Options) -> Result<Report, CliError> {
    let mut r = start(m, "bidiff", opts);
    let (_, laws) = c_and_i_laws(m, m.n()).map_err(invalid)?;
    let rep = bicomplex_verify(m, &laws).map_err(invalid)?;
    let collect = |fs: &[(String, Form)], op: &str| -> Vec<String> {
        fs.iter()
            .filter_map(|(name, f)| form_residual(m, &format!("{op}({name})"), f))
            .collect()
    };
    r.exact("dbar^2 = 0", collect(&rep.dbar_squared, "dbar^2"));
    r.exact(
        "d dbar + dbar d = 0",
        collect(&rep.anticommutator, "d dbar + dbar d"),
    );
    for (k, f) in rep.lenard.iter().enumerate() {
        let k = k + 1;
        let res = form_residual(m, "residual", f).into_iter().collect();
        r.exact(format!("{} dbar I{k} = {k} d I{}", k + 1, k + 1), res);
    }
    let mut table = Vec::with_capacity(m.dim());
    for a in 0..m.dim() {
        let img = dbar(m, &Form::scalar(m.dim(), Expr::coord(a))).map_err(invalid)?;
        table.push(format!(
            "dbar {} = {}",
            m.symbols().name(a),
            img.display(m.symbols())
        ));
    }
    r.lines("dbar on coordinates", table);
    Ok(r)
}

fn fnop(m: &PhaseModel, opts: &Options) -> Result<Report, CliError> {
    let mut r = start(m, "fnop", opts);
    let op = fn_operator(m).map_err(invalid)?;
    let torsion: Vec<String> = fn_torsion(&op.r_vectors)
        .into_iter()
        .filter(|(_, t)| !t.is_zero())
        .map(|((a, b), t)| {
            let s = m.symbols();
            format!("T(d/d{}, d/d{}) = {}", s.name(a), s.name(b), t.display(s))
        })
        .collect();
    r.exact("torsion = 0", torsion);
    r.exact(
        "invariance along the flow",
        tensor_residual(m, &fn_invariance(m, &op.r_vectors)),
    );
    let (_, laws) = c_and_i_laws(m, m.n()).map_err(invalid)?;
    for (k, f) in recursion_check(m, &op, &laws).iter().enumerate() {
        let k = k + 1;
        let res = form_residual(m, "residual", f).into_iter().collect();
        r.exact(format!("{} R(dI{k}) = {k} dI{}", k + 1, k + 1), res);
    }
    r.lines("R on vector fields", matrix_lines(m, &op.r_vectors));
    Ok(r)
}

fn orbit(
    m: &PhaseModel,
    j: Option<&str>,
    depth: usize,
    opts: &Options,
) -> Result<Report, CliError> {
    let mut r = start(m, "orbit", opts);
    let j = match j {
        Some(src) => m
            .symbols()
            .parse(src)
            .map_err(|e| CliError::Invalid(format!("--j: {e}")))?,
        None => (0..m.n()).map(Expr::coord).sum(),
    };
    r.option("j", show(m, &j));
    r.option("depth", depth);
    let fam = orbit_family(m, &j, depth).map_err(invalid)?;
    let rat =
        |c: &Option<nonnoether::Rational>| c.as_ref().map_or("none".to_string(), |c| c.to_string());
    r.flag(
        "c0 exists",
        fam.c0.is_some(),
        format!("c0 = {}", rat(&fam.c0)),
    );
    r.flag(
        "c1 exists",
        fam.c1.is_some(),
        format!("c1 = {}", rat(&fam.c1)),
    );
    if m.n() <= 3 {
        let brackets = involutivity_symbolic(m, &fam.family);
        let mut res = Vec::new();
        for (a, row) in brackets.iter().enumerate() {
            for (b, e) in row.iter().enumerate().skip(a + 1) {
                if !e.is_zero() {
                    res.push(format!("{{J{a}, J{b}}} = {}", show(m, e)));
                }
            }
        }
        r.exact("orbit in involution", res);
    } else {
        let tol = opts.tol.unwrap_or(DEFAULT_TOL);
        r.option("points", opts.points);
        r.option("tol", tol);
        let nb = NumericBracket::new(m, &fam.family);
        r.bound(
            "orbit in involution",
            nb.max_abs(&sample_points(m, opts), 0.0),
            tol,
        );
    }
    r.value("c0 (nested form)", rat(&fam.c0_nested));
    r.lines(
        "orbit",
        fam.family
            .iter()
            .enumerate()
            .map(|(k, f)| format!("J{k} = {}", show(m, f)))
            .collect(),
    );
    Ok(r)
}

fn hojman(m: &PhaseModel, depth: usize, opts: &Options) -> Result<Report, CliError> {
    let mut r = start(m, "hojman", opts);
    r.option("depth", depth);
    let vol = m
        .volume()
        .ok_or_else(|| CliError::Invalid("volume: the model has no volume form".into()))?;
    let fam = hojman_invariant(&m.flow(), m.e(), vol, depth).map_err(invalid)?;
    for (k, d) in fam.conservation.iter().enumerate() {
        let res = if d.is_zero() {
            Vec::new()
        } else {
            vec![show(m, d)]
        };
        r.exact(format!("J{k} conserved"), res);
    }
    r.lines(
        "invariants",
        fam.members
            .iter()
            .enumerate()
            .map(|(k, f)| format!("J{k} = {}", show(m, f)))
            .collect(),
    );
    Ok(r)
}

fn numverify(
    m: &PhaseModel,
    start_at: Option<&[f64]>,
    convergence: bool,
    opts: &Options,
) -> Result<Report, CliError> {
    let mut r = start(m, "numverify", opts);
    let t_end = opts.t_end.unwrap_or(10.0);
    let dt = opts.dt.unwrap_or(1e-3);
    let tol = opts.tol.unwrap_or(DEFAULT_TOL);
    let z0 = match start_at {
        Some(z) if z.len() != m.dim() => {
            return Err(CliError::Invalid(format!(
                "--start: {} values for dimension {}",
                z.len(),
                m.dim()
            )))
        }
        Some(z) => z.to_vec(),
        None => Lcg::new(opts.seed).point(m.dim(), -1.0, 1.0),
    };
    r.option("T", t_end);
    r.option("dt", dt);
    r.option("tol", tol);
    r.option("start", z0.clone());

    let set = match ConservedSet::build(m, m.n()) {
        Ok(set) => set,
        Err(_) => ConservedSet {
            y: y_laws(m).unwrap_or_default(),
            c: Vec::new(),
            i: Vec::new(),
        },
    };
    let monitors = standard_monitors(m, &set);
    let traj = match integrate_hamiltonian(m, &z0, t_end, dt, &monitors, 10) {
        Ok(t) => t,
        Err(e) => {
            r.flag("integration", false, e.to_string());
            return Ok(r);
        }
    };
    let mut rows = Vec::new();
    for (name, series) in &traj.monitors {
        let d = traj.drift(name).unwrap_or(f64::NAN);
        r.bound(format!("{name} drift"), d, tol);
        rows.push(vec![
            Value::from(name.clone()),
            Value::from(series[0]),
            Value::from(*series.last().unwrap()),
            Value::from(d),
        ]);
    }
    if let Ok(lp) = lax_pair(m) {
        match isospectral_check(&lp, &traj) {
            Ok(d) => r.bound("Lax eigenvalue drift", d, LAX_TOL),
            Err(e) => r.flag("Lax eigenvalue drift", false, e.to_string()),
        }
    }
    r.table(
        "drift",
        &["quantity", "initial", "final", "relative drift"],
        rows,
    );
    r.value("final state", traj.end().to_vec());
    if convergence {
        match convergence_order(m, &z0, t_end, &DT_LADDER) {
            Ok(c) => {
                let ok = (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&c.order);
                r.flag(
                    "RK4 order",
                    ok,
                    format!("{:.3} (window {:?})", c.order, ORDER_WINDOW),
                );
                let rows = c
                    .dts
                    .iter()
                    .zip(&c.errors)
                    .map(|(d, e)| vec![Value::from(*d), Value::from(*e)])
                    .collect();
                r.table("convergence", &["dt", "endpoint error"], rows);
            }
            Err(e) => r.flag("RK4 order", false, e.to_string()),
        }
    }
    Ok(r)
}

fn pde(spec: PdeSpec, kappa: f64, opts: &Options) -> Result<Report, CliError> {
    let grid = opts.grid.unwrap_or(spec.grid);
    let spec = PdeSpec { grid, ..spec };
    let name = spec.equation.name();
    let mut r = Report::new("pde", name, opts.seed);
    let t_end = opts.t_end.unwrap_or(5.0);
    r.option("grid", grid);
    r.option("length", spec.length);
    r.option("T", t_end);
    r.option("kappa", kappa);
    if let Some(dt) = opts.dt {
        r.option("dt", dt);
    }
    let mid = spec.length / 2.0;
    let soliton = kdv_soliton(kappa, mid, spec.length);
    let sech = sech_profile(kappa, kappa, mid);
    let kdv = name == "kdv";
    let run = if kdv {
        pde_run(
            &spec,
            &|x| soliton(x, 0.0),
            t_end,
            opts.dt,
            100,
            Some(&soliton),
        )
    } else {
        pde_run(&spec, &sech, t_end, opts.dt, 100, None)
    };
    let rep = match run {
        Ok(rep) => rep,
        Err(NumError::BadGrid(msg)) => return Err(CliError::Invalid(format!("--grid: {msg}"))),
        Err(e) => {
            r.flag("integration", false, e.to_string());
            return Ok(r);
        }
    };
    let default_tols: &[f64] = if kdv {
        &[1e-7, 1e-6, 1e-4]
    } else {
        &[1e-4, 1e-4, 1e-4]
    };
    let mut rows = Vec::new();
    for (k, name) in rep.names.iter().enumerate() {
        let tol = opts.tol.or_else(|| default_tols.get(k).copied());
        if let Some(tol) = tol {
            r.bound(format!("{name} drift"), rep.drifts[k], tol);
        }
        rows.push(vec![
            Value::from(name.clone()),
            Value::from(rep.initial[k]),
            Value::from(rep.last[k]),
            Value::from(rep.drifts[k]),
        ]);
    }
    if let Some(err) = rep.shape_error {
        r.bound("L2 shape error", err, 1e-3);
    }
    r.value("dt", rep.dt);
    r.value("steps", rep.steps);
    r.table(
        "drift",
        &["density", "initial", "final", "relative drift"],
        rows,
    );
    Ok(r)
}

fn fixtures(filter: &str, opts: &Options) -> Result<Report, CliError> {
    let mut r = Report::new("fixtures", "toda", opts.seed);
    r.option("filter", filter);
    let outcomes = run_fixtures(filter).map_err(invalid)?;
    let mut known = 0;
    for o in &outcomes {
        let note = match (o.matches, o.fixture.discrepancy) {
            (true, _) => String::new(),
            (false, Some(why)) => {
                known += 1;
                format!("known discrepancy: {why}")
            }
            (false, None) => "computed value differs from the reference".into(),
        };
        r.flag(o.fixture.id.clone(), o.matches, note);
    }
    r.value("fixtures", outcomes.len());
    r.value("known discrepancies", known);
    Ok(r)
}
