use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use radialhyp::analysis::{bilinear_scan, weighted_bv, BilinearCase, Parity, QuadConfig};
use radialhyp::cartesian::{
    evolve, quadratic_source_max, radialize_profiles, sample_radial, stability_number, time_step3d, CartesianGrid,
};
use radialhyp::io::{load_profiles, load_system, load_wave_data, IoError};
use radialhyp::radial_solver::{simulate, SimulationConfig, SolverError};
use radialhyp::spectral::{build_m1, build_m2, characteristic_system, check_null_condition, diagonalize};
use radialhyp::system_model::{assemble_full_matrices, check_rotational_invariance, validate_spec, DenseQuadratic};
use radialhyp::{SystemSpec, Tensor3};

use crate::{BilinearArgs, CaseArg, Cli, Command, Simulate3dArgs, SimulateArgs, FORMAT_VERSION};

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unreadable input.
    Usage(String),
    /// The input was read but the computation or check failed.
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Read { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn domain<E: fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn output_err<E: fmt::Display>(e: E) -> CliError {
    CliError::Usage(format!("cannot write output: {e}"))
}

type Result<T> = std::result::Result<T, CliError>;

struct Out {
    json: bool,
    quiet: bool,
}

impl Out {
    /// Prints `report` as JSON, or `text` unless quiet.
    fn emit(&self, report: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
        } else if !self.quiet {
            println!("{}", text());
        }
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn show(name: &str, m: &DMatrix<f64>) -> String {
    let mut s = format!("{name} ({}×{}):\n", m.nrows(), m.ncols());
    for r in m.row_iter() {
        let cells: Vec<String> = r.iter().map(|x| format!("{:>11.6}", if x.abs() < 1e-14 { 0.0 } else { *x })).collect();
        s.push_str(&format!("  [{}]\n", cells.join(" ")));
    }
    s
}

fn flat(t: &Tensor3<f64>) -> Value {
    json!({ "dims": t.dims(), "data": t.data() })
}

fn system(path: &Path) -> Result<SystemSpec<f64>> {
    Ok(load_system(path)?)
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    let out = Out { json: cli.json, quiet: cli.quiet };
    match &cli.command {
        Command::Validate(s) => validate(&out, &s.system),
        Command::Assemble(s) => assemble(&out, &system(&s.system)?),
        Command::CheckInvariance { system: s, samples, seed, tol } => {
            check_invariance(&out, &system(&s.system)?, *samples, *seed, *tol)
        }
        Command::Spectrum(s) => spectrum(&out, &system(&s.system)?),
        Command::CheckNull { system: s, tol, require_null } => check_null(&out, &system(&s.system)?, *tol, *require_null),
        Command::Reduce(s) => reduce(&out, &system(&s.system)?),
        Command::Simulate(a) => run_simulate(&out, a),
        Command::Simulate3d(a) => run_simulate3d(&out, a),
        Command::Norms { dir, out: dest } => norms(&out, dir, dest.as_deref()),
        Command::Bilinear(a) => bilinear(&out, a),
    }
}

fn validate(out: &Out, path: &Path) -> Result<()> {
    let violations = match load_system::<f64>(path) {
        Ok(spec) => validate_spec(&spec).violations,
        Err(e @ IoError::Read { .. }) => return Err(e.into()),
        Err(e) => vec![e.to_string()],
    };
    let ok = violations.is_empty();
    out.emit(json!({ "format_version": FORMAT_VERSION, "valid": ok, "violations": violations }), || {
        if ok {
            "valid".to_string()
        } else {
            format!("invalid:\n  {}", violations.join("\n  "))
        }
    });
    if ok {
        Ok(())
    } else {
        Err(CliError::Domain(format!("{} violation(s)", violations.len())))
    }
}

fn assemble(out: &Out, spec: &SystemSpec<f64>) -> Result<()> {
    let mats = assemble_full_matrices(spec).map_err(domain)?;
    let report = json!({
        "format_version": FORMAT_VERSION,
        "dim": mats.dim(),
        "A1": rows(&mats.a[0]),
        "A2": rows(&mats.a[1]),
        "A3": rows(&mats.a[2]),
        "inf_norm_sum": mats.inf_norm_sum(),
    });
    out.emit(report, || {
        let mut s = String::new();
        for (i, a) in mats.a.iter().enumerate() {
            s.push_str(&show(&format!("A{}", i + 1), a));
        }
        s
    });
    Ok(())
}

fn check_invariance(out: &Out, spec: &SystemSpec<f64>, samples: usize, seed: u64, tol: f64) -> Result<()> {
    let mats = assemble_full_matrices(spec).map_err(domain)?;
    let quad = DenseQuadratic::from_spec(spec).map_err(domain)?;
    let rep = check_rotational_invariance(&mats.a, &quad, spec.l, spec.m, samples, seed).map_err(domain)?;
    let pass = rep.max_residual <= tol;
    let mut report = serde_json::to_value(&rep).expect("report serializes");
    report["format_version"] = json!(FORMAT_VERSION);
    report["tol"] = json!(tol);
    report["pass"] = json!(pass);
    out.emit(report, || {
        format!(
            "{} rotations (seed {seed}): matrix residual {:.3e}, quadratic residual {:.3e} -> {}",
            rep.samples,
            rep.max_matrix_residual,
            rep.max_quadratic_residual,
            if pass { "invariant" } else { "NOT invariant" }
        )
    });
    if pass {
        Ok(())
    } else {
        Err(CliError::Domain(format!("invariance residual {:.3e} exceeds {tol:e}", rep.max_residual)))
    }
}

fn spectrum(out: &Out, spec: &SystemSpec<f64>) -> Result<()> {
    let m1 = build_m1(spec).map_err(domain)?;
    let eig = diagonalize(&m1).map_err(domain)?;
    let m2 = build_m2(spec).map_err(domain)?;
    let m2_eig: Vec<(f64, f64)> = m2.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    let report = json!({
        "format_version": FORMAT_VERSION,
        "M1": rows(&m1),
        "eigenvalues": eig.lambda.as_slice(),
        "L": rows(&eig.l),
        "R": rows(&eig.r),
        "groups": eig.groups,
        "M2_eigenvalues": m2_eig,
    });
    out.emit(report, || {
        let mut s = format!("eigenvalues: {:?}\n", eig.lambda.as_slice());
        s.push_str(&format!("groups: {:?}\n", eig.groups));
        s.push_str(&show("L", &eig.l));
        s.push_str(&show("R", &eig.r));
        s
    });
    Ok(())
}

fn check_null(out: &Out, spec: &SystemSpec<f64>, tol: f64, require: bool) -> Result<()> {
    let chars = characteristic_system(spec).map_err(domain)?;
    let rep = check_null_condition(spec, &chars, tol);
    let mut report = serde_json::to_value(&rep).expect("report serializes");
    report["format_version"] = json!(FORMAT_VERSION);
    report["eigenvalues"] = json!(chars.lambda.as_slice());
    out.emit(report, || {
        format!(
            "scalar rows {:.3e}, vector rows {:.3e}, clusters {:.3e} (tol {tol:e}) -> {}",
            rep.residual32,
            rep.residual33,
            rep.residual34,
            if rep.pass { "null condition holds" } else { "null condition fails" }
        )
    });
    if require && !rep.pass {
        return Err(CliError::Domain("null condition fails".into()));
    }
    Ok(())
}

fn reduce(out: &Out, spec: &SystemSpec<f64>) -> Result<()> {
    let chars = characteristic_system(spec).map_err(domain)?;
    let report = json!({
        "format_version": FORMAT_VERSION,
        "l": spec.l,
        "m": spec.m,
        "B": rows(&spec.b),
        "C": rows(&spec.c),
        "Gamma": flat(&spec.gamma),
        "Omega": flat(&spec.omega),
        "Upsilon": flat(&spec.upsilon),
        "characteristic": {
            "lambda": chars.lambda.as_slice(),
            "L": rows(&chars.l),
            "R": rows(&chars.r),
            "g1": flat(&chars.g1),
            "g2": flat(&chars.g2),
        },
    });
    out.emit(report, || {
        let mut s = String::new();
        s.push_str("ρ_t + B w_r + (2/r) B w = Γ(ρ, ρ) + Ω(w, w)\n");
        s.push_str("w_t + C ρ_r = Υ(ρ, w)\n");
        s.push_str(&show("B", &spec.b));
        s.push_str(&show("C", &spec.c));
        s.push_str("characteristic form, z = ρ̃ + w̃:\n");
        s.push_str("ρ̃_t + λ (w̃_r + 2 w̃ / r) = g1(z, z)\nw̃_t + λ ρ̃_r = g2(z, z)\n");
        s.push_str(&format!("λ = {:?}", chars.lambda.as_slice()));
        s
    });
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(output_err)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(output_err)
}

fn channel_headers(l: usize, m: usize) -> Vec<String> {
    (0..l).map(|k| format!("rho_{k}")).chain((0..m).map(|q| format!("w_{q}"))).collect()
}

fn run_simulate(out: &Out, a: &SimulateArgs) -> Result<()> {
    let spec = system(&a.system.system)?;
    let prof = load_profiles::<f64>(&a.profiles)?;
    if !(a.cfl > 0.0 && a.cfl <= 1.0) {
        return Err(CliError::Domain(format!("CFL number {} outside (0, 1]: upwind stability needs dt·max|λ|/h ≤ 1", a.cfl)));
    }
    let cfg = SimulationConfig { n: a.n, r_max: a.r_max, cfl: a.cfl, snapshot_stride: a.snap_stride, norm_stride: a.norm_stride };
    let traj = simulate(&spec, &prof.rho, &prof.w, a.t_end, &cfg).map_err(|e| match e {
        SolverError::Cfl { nu, max } => CliError::Domain(format!("CFL violation: ν = {nu} > {max}")),
        e => domain(e),
    })?;
    let sys = characteristic_system(&spec).map_err(domain)?;

    let snap_dir = a.out.join("snapshots");
    create_dir(&snap_dir)?;
    let mut index = csv_writer(&a.out.join("snapshots_index.csv"))?;
    index.write_record(["index", "t", "file"]).map_err(output_err)?;
    let heads = channel_headers(spec.l, spec.m);
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let name = format!("snap_{i:05}.csv");
        let (rho, w) = snap.physical(&sys, spec.l).map_err(domain)?;
        let mut wr = csv_writer(&snap_dir.join(&name))?;
        let mut header = vec!["r".to_string()];
        header.extend(heads.iter().cloned());
        header.extend((0..sys.dim()).flat_map(|e| [format!("rho_tilde_{e}"), format!("w_tilde_{e}")]));
        wr.write_record(&header).map_err(output_err)?;
        for j in 0..snap.grid.n() {
            let mut rec = vec![snap.grid.center(j).to_string()];
            rec.extend(rho.iter().chain(&w).map(|c| c[j].to_string()));
            rec.extend((0..sys.dim()).flat_map(|e| [snap.rho_tilde[e][j].to_string(), snap.w_tilde[e][j].to_string()]));
            wr.write_record(&rec).map_err(output_err)?;
        }
        wr.flush().map_err(output_err)?;
        index.write_record([i.to_string(), snap.t.to_string(), format!("snapshots/{name}")]).map_err(output_err)?;
    }
    index.flush().map_err(output_err)?;

    let mut nw = csv_writer(&a.out.join("norms.csv"))?;
    nw.write_record(["t", "W0", "W1", "W"]).map_err(output_err)?;
    for n in &traj.norms {
        nw.write_record([n.t.to_string(), n.alpha0.to_string(), n.alpha1.to_string(), n.total().to_string()]).map_err(output_err)?;
    }
    nw.flush().map_err(output_err)?;

    let last = traj.last();
    let summary = json!({
        "format_version": FORMAT_VERSION,
        "system": a.system.system.display().to_string(),
        "profiles": a.profiles.display().to_string(),
        "T": a.t_end,
        "N": a.n,
        "r_max": last.grid.r_max(),
        "h": last.grid.h(),
        "cfl": a.cfl,
        "dt": traj.dt,
        "steps": traj.steps,
        "t_final": last.t,
        "snapshots": traj.snapshots.len(),
        "max_abs_final": last.max_abs(),
        "max_norm": traj.norms.iter().map(|n| n.total()).fold(0.0, f64::max),
        "blowup": traj.blowup,
        "eigenvalues": sys.lambda.as_slice(),
    });
    fs::write(a.out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("JSON values serialize"))
        .map_err(output_err)?;
    out.emit(summary, || {
        let mut s = format!(
            "{} steps of dt = {:.4e} on N = {}, R_max = {:.4}; wrote {} snapshots to {}",
            traj.steps,
            traj.dt,
            a.n,
            last.grid.r_max(),
            traj.snapshots.len(),
            a.out.display()
        );
        if let Some(b) = traj.blowup {
            s.push_str(&format!("\nblow-up at t = {}, r = {}, channel {}", b.t, b.r, b.channel));
        }
        s
    });
    Ok(())
}

fn run_simulate3d(out: &Out, a: &Simulate3dArgs) -> Result<()> {
    let spec = system(&a.system.system)?;
    let prof = load_profiles::<f64>(&a.profiles)?;
    if prof.rho.len() != spec.l || prof.w.len() != spec.m {
        return Err(CliError::Domain(format!(
            "expected {} density and {} vector profiles, got {} and {}",
            spec.l,
            spec.m,
            prof.rho.len(),
            prof.w.len()
        )));
    }
    if !(a.cfl > 0.0 && a.cfl <= 1.0) {
        return Err(CliError::Domain(format!("stability number {} outside (0, 1]", a.cfl)));
    }
    if !(a.t_end > 0.0) {
        return Err(CliError::Domain(format!("final time must be positive, got {}", a.t_end)));
    }
    let grid = CartesianGrid::new(a.half_width, a.n).map_err(domain)?;
    let mats = assemble_full_matrices(&spec).map_err(domain)?;
    let init = radialize_profiles(grid, &prof.rho, &prof.w).map_err(domain)?;
    let source0 = quadratic_source_max(&init, &spec);
    let (dt, steps) = time_step3d(&mats, &grid, a.t_end, a.cfl);
    let fin = evolve(&init, &mats, &spec, dt, steps).map_err(domain)?;
    let nr = a.radii.max(2);
    let rmax = 0.75 * a.half_width;
    let radii: Vec<f64> = (0..nr).map(|k| rmax * k as f64 / (nr - 1) as f64).collect();
    let smp = sample_radial(&fin, spec.l, &radii).map_err(domain)?;
    let (mr, mw) = smp.mean();

    create_dir(&a.out)?;
    let mut wr = csv_writer(&a.out.join("radial_profiles.csv"))?;
    let mut header = vec!["r".to_string()];
    header.extend(channel_headers(spec.l, spec.m));
    header.push("spread".into());
    wr.write_record(&header).map_err(output_err)?;
    for (k, r) in radii.iter().enumerate() {
        let mut rec = vec![r.to_string()];
        rec.extend(mr.iter().chain(&mw).map(|c| c[k].to_string()));
        rec.push(ray_spread(&smp.rho, &smp.w, k).to_string());
        wr.write_record(&rec).map_err(output_err)?;
    }
    wr.flush().map_err(output_err)?;

    if a.dump {
        let mut fw = csv_writer(&a.out.join("field.csv"))?;
        let mut header = vec!["x".to_string(), "y".into(), "z".into()];
        header.extend((0..fin.dim).map(|c| format!("u_{c}")));
        fw.write_record(&header).map_err(output_err)?;
        let n = grid.n();
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let p = grid.position(i, j, k);
                    let mut rec: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    rec.extend(fin.at(i, j, k).iter().map(|x| x.to_string()));
                    fw.write_record(&rec).map_err(output_err)?;
                }
            }
        }
        fw.flush().map_err(output_err)?;
    }

    let summary = json!({
        "format_version": FORMAT_VERSION,
        "system": a.system.system.display().to_string(),
        "profiles": a.profiles.display().to_string(),
        "X": a.half_width,
        "n": a.n,
        "hx": grid.hx(),
        "T": a.t_end,
        "dt": dt,
        "steps": steps,
        "stability_number": stability_number(&mats, &grid, dt),
        "rays": smp.directions.len(),
        "max_spread": smp.spread,
        "initial_source_max": source0,
        "max_abs_final": fin.max_abs(),
    });
    fs::write(a.out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("JSON values serialize"))
        .map_err(output_err)?;
    out.emit(summary, || {
        format!(
            "{steps} Lax–Friedrichs steps on {}³ nodes; max spread across {} rays {:.3e}; wrote {}",
            a.n,
            smp.directions.len(),
            smp.spread,
            a.out.display()
        )
    });
    Ok(())
}

/// Spread between rays at radius index `k`, over all channels.
fn ray_spread(rho: &[Vec<Vec<f64>>], w: &[Vec<Vec<f64>>], k: usize) -> f64 {
    let channels = |f: &[Vec<Vec<f64>>]| f.first().map_or(0, Vec::len);
    let mut worst = 0.0f64;
    for f in [rho, w] {
        for c in 0..channels(f) {
            let (lo, hi) = f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), ray| (lo.min(ray[c][k]), hi.max(ray[c][k])));
            if lo <= hi {
                worst = worst.max(hi - lo);
            }
        }
    }
    worst
}

struct Snapshot {
    t: f64,
    r: Vec<f64>,
    channels: Vec<Vec<f64>>,
}

fn read_snapshot(path: &Path) -> Result<(Vec<Parity>, Snapshot)> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let headers = rd.headers().map_err(domain)?.clone();
    let cols: Vec<(usize, Parity)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            if h.starts_with("rho_") && !h.starts_with("rho_tilde") {
                Some((i, Parity::Even))
            } else if h.starts_with("w_") && !h.starts_with("w_tilde") {
                Some((i, Parity::Odd))
            } else {
                None
            }
        })
        .collect();
    let mut r = Vec::new();
    let mut channels = vec![Vec::new(); cols.len()];
    for rec in rd.records() {
        let rec = rec.map_err(domain)?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| CliError::Domain(format!("bad number in {}", path.display())))
        };
        r.push(num(0)?);
        for (c, (i, _)) in cols.iter().enumerate() {
            channels[c].push(num(*i)?);
        }
    }
    Ok((cols.into_iter().map(|(_, p)| p).collect(), Snapshot { t: 0.0, r, channels }))
}

fn norms(out: &Out, dir: &Path, dest: Option<&Path>) -> Result<()> {
    let index_path = dir.join("snapshots_index.csv");
    let mut rd = csv::Reader::from_path(&index_path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", index_path.display())))?;
    let mut snaps = Vec::new();
    let mut parity = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(domain)?;
        let t: f64 = rec.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| CliError::Domain("bad time in index".into()))?;
        let (p, mut s) = read_snapshot(&dir.join(rec.get(2).unwrap_or_default()))?;
        s.t = t;
        parity = p;
        snaps.push(s);
    }
    if snaps.len() < 3 {
        return Err(CliError::Domain(format!(
            "need at least three snapshots for time differences, found {} (rerun simulate with --snap-stride)",
            snaps.len()
        )));
    }
    let mut rows_out = Vec::new();
    for win in snaps.windows(3) {
        let (dt0, dt1) = (win[1].t - win[0].t, win[2].t - win[1].t);
        // Skip the uneven tail left when the stride does not divide the run.
        if (dt0 - dt1).abs() > 1e-9 * dt0.abs().max(1.0) {
            continue;
        }
        let rep = weighted_bv(&win[1].r, &parity, win[1].t, dt0, &win[0].channels, &win[1].channels, &win[2].channels)
            .map_err(domain)?;
        rows_out.push(rep);
    }
    let mut buf = Vec::new();
    {
        let mut wr = csv::Writer::from_writer(&mut buf);
        wr.write_record(["t", "W0", "W1", "W"]).map_err(output_err)?;
        for n in &rows_out {
            wr.write_record([n.t.to_string(), n.alpha0.to_string(), n.alpha1.to_string(), n.total().to_string()])
                .map_err(output_err)?;
        }
        wr.flush().map_err(output_err)?;
    }
    match dest {
        Some(p) => fs::write(p, &buf).map_err(output_err)?,
        None if !out.json => std::io::stdout().write_all(&buf).map_err(output_err)?,
        None => {}
    }
    if out.json {
        let series: Vec<Value> = rows_out.iter().map(|n| json!({ "t": n.t, "W0": n.alpha0, "W1": n.alpha1, "W": n.total() })).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "format_version": FORMAT_VERSION, "norms": series })).expect("JSON values serialize")
        );
    }
    Ok(())
}

fn bilinear(out: &Out, a: &BilinearArgs) -> Result<()> {
    let da = load_wave_data::<f64>(&a.data_a)?;
    let db = load_wave_data::<f64>(&a.data_b)?;
    let [la, lb] = a.lambdas[..] else {
        return Err(CliError::Usage("--lambdas takes exactly two values".into()));
    };
    let case = BilinearCase::classify(la, lb).map_err(domain)?;
    let want = match a.case {
        CaseArg::Distinct => BilinearCase::DistinctSpeeds,
        CaseArg::Opposite => BilinearCase::OppositeSpeeds,
        CaseArg::Zero => BilinearCase::ZeroSpeed,
    };
    if case != want {
        return Err(CliError::Domain(format!("speeds ({la}, {lb}) fall under the {} case, not {}", case.name(), want.name())));
    }
    let cfg = QuadConfig { rtol: a.rtol, ..QuadConfig::default() };
    let scan = bilinear_scan(&da, &db, la, lb, &a.t_grid, &cfg).map_err(domain)?;

    let mut buf = Vec::new();
    {
        let mut wr = csv::Writer::from_writer(&mut buf);
        wr.write_record(["T", "LHS", "RHS", "ratio"]).map_err(output_err)?;
        for (i, t) in scan.t.iter().enumerate() {
            let ratio = scan.ratio[i].map_or(String::new(), |r| r.to_string());
            wr.write_record([t.to_string(), scan.lhs[i].to_string(), scan.rhs.to_string(), ratio]).map_err(output_err)?;
        }
        wr.flush().map_err(output_err)?;
    }
    match &a.out {
        Some(p) => fs::write(p, &buf).map_err(output_err)?,
        None if !out.json && !out.quiet => std::io::stdout().write_all(&buf).map_err(output_err)?,
        None => {}
    }
    if out.json {
        let mut report = serde_json::to_value(&scan).expect("scan serializes");
        report["format_version"] = json!(FORMAT_VERSION);
        println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
    } else if !out.quiet && a.out.is_some() {
        println!("{} case: max ratio {:.4e}, tail slope {:.3e}", case.name(), scan.max_ratio, scan.tail_slope);
    }
    Ok(())
}
