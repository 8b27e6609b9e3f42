use std::path::{Path, PathBuf};

use sbgm::classical::{bi_elliptic, hohmann, single_impulse};
use sbgm::lambert::{lambert_free_departure, lambert_scenario_a, lambert_scenario_b, LambertOptimum};
use sbgm::optimize::{sweep_omega2, SweepResult};
use sbgm::text::format_g;
use sbgm::variational::propagate_decay;
use sbgm::{solve_chain, two_impulse_perigee, two_impulse_shape_based, Chain, FreeEnd, ParamId};

use crate::error::CliError;
use crate::input::{FreeEndOption, Method, Overrides, ScenarioFile};
use crate::report::{
    ChainOut, CompareRow, DecayOut, DiagnosticsOut, LambertOut, Outcome, RunReport, ScheduleOut, Skipped, SweepOut,
};
use crate::sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Compare,
    Sample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Compare => "compare",
            Command::Sample => "sample",
        }
    }
}

/// File name and contents, written only once every computation succeeded.
pub type Output = (&'static str, Vec<u8>);

/// Loads the scenario, runs `command` and writes its files into `out_dir`.
pub fn run(command: Command, scenario: &Path, out_dir: &Path, overrides: &Overrides) -> Result<Vec<PathBuf>, CliError> {
    let mut file = ScenarioFile::load(scenario)?;
    file.apply(overrides);
    let outputs = execute(command, &file)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (name, bytes) in outputs {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes)?;
        written.push(path);
    }
    Ok(written)
}

pub fn execute(command: Command, file: &ScenarioFile) -> Result<Vec<Output>, CliError> {
    match command {
        Command::Solve => solve(file),
        Command::Sweep => sweep(file),
        Command::Compare => compare(file),
        Command::Sample => sample_cmd(file),
    }
}

fn report(command: Command, file: &ScenarioFile, outcome: Outcome) -> Output {
    let r = RunReport {
        command: command.name().into(),
        method: file.method,
        scenario: file.clone(),
        outcome,
    };
    ("report.json", r.to_json().into_bytes())
}

fn chain_outcome(chain: &Chain, diagnostics: Option<DiagnosticsOut>) -> Outcome {
    Outcome::Chain {
        chain: ChainOut::from(chain),
        diagnostics,
    }
}

fn circular_radii(file: &ScenarioFile) -> Result<(f64, f64), CliError> {
    let (i, f) = (file.initial_orbit()?, file.final_orbit()?);
    if !i.is_circular() || !f.is_circular() {
        return Err(CliError::Parse(
            "this method needs circular initial and final orbits".into(),
        ));
    }
    Ok((i.a(), f.a()))
}

fn r_mid(file: &ScenarioFile) -> Result<f64, CliError> {
    file.options
        .r_mid_km
        .ok_or_else(|| CliError::Parse("bi-elliptic runs need `options.r_mid_km`".into()))
}

fn lambert_b(file: &ScenarioFile) -> Result<LambertOptimum<f64>, CliError> {
    let s = file.omega2_family()?;
    if file.options.lambert_free_departure == Some(true) {
        let (tof, theta) = file.free_departure_grids()?;
        Ok(lambert_free_departure(&s, &tof, &theta)?)
    } else {
        Ok(lambert_scenario_b(&s, &file.tof_grid()?, &file.theta_grid()?)?)
    }
}

/// The shape-based chain for a file with fixed adjustables.
fn sbgm_chain(file: &ScenarioFile) -> Result<(Chain, Option<DiagnosticsOut>), CliError> {
    let (_, swept) = file.adjustables()?;
    if let Some(id) = swept.first() {
        return Err(CliError::Parse(format!(
            "adjustable {id} is marked \"sweep\"; use the sweep command"
        )));
    }
    let s = file.scenario()?;
    let sol = match file.options.free_end {
        Some(end) => {
            let end = match end {
                FreeEndOption::Departure => FreeEnd::Departure,
                FreeEndOption::Arrival => FreeEnd::Arrival,
            };
            two_impulse_shape_based(&s, end, None)?
        }
        None => solve_chain(&s, None)?,
    };
    Ok((sol.chain, Some(DiagnosticsOut::from(&sol.diagnostics))))
}

fn single_chainless(file: &ScenarioFile) -> Result<Vec<sbgm::Schedule>, CliError> {
    Ok(single_impulse(
        &file.initial_orbit()?,
        &file.final_orbit()?,
        &file.grav()?,
        file.theta_dep(),
    )?)
}

fn solve(file: &ScenarioFile) -> Result<Vec<Output>, CliError> {
    let g = file.grav()?;
    let mut extra = Vec::new();
    let outcome = match file.method {
        Method::Sbgm => {
            let (chain, diag) = sbgm_chain(file)?;
            chain_outcome(&chain, diag)
        }
        Method::Hohmann => {
            let (r1, r2) = circular_radii(file)?;
            chain_outcome(&hohmann(r1, r2, &g)?, None)
        }
        Method::Bielliptic => {
            let (r1, r2) = circular_radii(file)?;
            chain_outcome(&bi_elliptic(r1, r_mid(file)?, r2, &g)?, None)
        }
        Method::TwoImpulsePerigee => {
            let sol = two_impulse_perigee(&file.initial_orbit()?, &file.final_orbit()?, &g)?;
            chain_outcome(&sol.chain, Some(DiagnosticsOut::from(&sol.diagnostics)))
        }
        Method::Single => Outcome::Single {
            solutions: single_chainless(file)?.iter().map(ScheduleOut::from).collect(),
        },
        Method::LambertA => {
            let s = file.omega2_family()?;
            Outcome::Lambert(LambertOut::from(&lambert_scenario_a(&s, &file.tof_grid()?)?))
        }
        Method::LambertB => Outcome::Lambert(LambertOut::from(&lambert_b(file)?)),
        Method::Variational => {
            let (profile, span, step) = file.decay()?;
            let history = propagate_decay(&file.initial_orbit()?, &profile, span, step)?;
            let mut csv = Vec::new();
            history.write_csv(&mut csv)?;
            extra.push(("history.csv", csv));
            Outcome::Decay(DecayOut::from(&history))
        }
    };
    let mut out = vec![report(Command::Solve, file, outcome)];
    out.extend(extra);
    Ok(out)
}

fn run_sweep(file: &ScenarioFile) -> Result<SweepResult<f64>, CliError> {
    if file.method != Method::Sbgm {
        return Err(CliError::Parse("the sweep command needs method \"sbgm\"".into()));
    }
    let (_, swept) = file.adjustables()?;
    if swept != [ParamId::Omega(2)] || file.impulses != Some(3) {
        return Err(CliError::Parse(
            "the sweep command needs three impulses and exactly `\"omega2\": \"sweep\"`".into(),
        ));
    }
    Ok(sweep_omega2(&file.scenario()?, &file.sweep_options()?)?)
}

fn sweep(file: &ScenarioFile) -> Result<Vec<Output>, CliError> {
    let result = run_sweep(file)?;
    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    Ok(vec![
        report(Command::Sweep, file, Outcome::Sweep(SweepOut::from(&result))),
        ("sweep.csv", csv),
    ])
}

fn row(method: &str, variant: &str, impulses: usize, s: &ScheduleOut, smooth: bool) -> CompareRow {
    CompareRow {
        method: method.into(),
        variant: variant.into(),
        impulses,
        j_c: s.j_c,
        j_m: s.j_m,
        time_s: s.total_time_s,
        smooth,
    }
}

fn lambert_rows(rows: &mut Vec<CompareRow>, method: &str, o: &LambertOptimum<f64>) {
    for (variant, c) in [("CE", &o.best_ce), ("MI", &o.best_mi)] {
        let mut r = row(method, variant, 2, &ScheduleOut::from(&c.schedule), false);
        r.time_s = c.tof;
        rows.push(r);
    }
}

/// Every applicable method on one scenario; inapplicable or failing ones
/// are listed with the reason.
fn compare(file: &ScenarioFile) -> Result<Vec<Output>, CliError> {
    let g = file.grav()?;
    let (initial, target) = (file.initial_orbit()?, file.final_orbit()?);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut skip = |method: &str, reason: String| {
        skipped.push(Skipped {
            method: method.into(),
            reason,
        })
    };

    match single_chainless(file) {
        Ok(solutions) => {
            for (k, s) in solutions.iter().enumerate() {
                let out = ScheduleOut::from(s);
                rows.push(row("single", &format!("crossing {}", k + 1), 1, &out, false));
            }
        }
        Err(e) => skip("single", e.to_string()),
    }
    match two_impulse_perigee(&initial, &target, &g) {
        Ok(sol) => {
            let out = ScheduleOut::from(&sol.chain.schedule());
            rows.push(row("two-impulse-perigee", "perigee start", 2, &out, true));
        }
        Err(e) => skip("two-impulse-perigee", e.to_string()),
    }
    match circular_radii(file) {
        Ok((r1, r2)) => {
            match hohmann(r1, r2, &g) {
                Ok(c) => rows.push(row("hohmann", "-", 2, &ScheduleOut::from(&c.schedule()), true)),
                Err(e) => skip("hohmann", e.to_string()),
            }
            match file.options.r_mid_km {
                Some(rm) => match bi_elliptic(r1, rm, r2, &g) {
                    Ok(c) => rows.push(row("bielliptic", "-", 3, &ScheduleOut::from(&c.schedule()), true)),
                    Err(e) => skip("bielliptic", e.to_string()),
                },
                None => skip("bielliptic", "no options.r_mid_km".into()),
            }
        }
        Err(_) => {
            skip("hohmann", "end orbits are not both circular".into());
            skip("bielliptic", "end orbits are not both circular".into());
        }
    }

    let family = file.omega2_family()?;
    match sweep_omega2(&family, &file.sweep_options()?) {
        Ok(r) => {
            for t in &r.two_impulse {
                let out = ScheduleOut::from(&t.point.schedule);
                rows.push(row("sbgm", &format!("dv{}=0", t.vanishing + 1), 2, &out, true));
            }
            for (variant, p) in [("CE", &r.optimum_ce), ("MI", &r.optimum_mi)] {
                match p {
                    Some(p) => rows.push(row("sbgm", variant, 3, &ScheduleOut::from(&p.schedule), true)),
                    None => skip("sbgm", format!("no converged {variant} optimum")),
                }
            }
        }
        Err(e) => skip("sbgm", e.to_string()),
    }

    let lambert = file.omega2_family()?;
    let tof = file.tof_grid()?;
    match lambert_scenario_a(&lambert, &tof) {
        Ok(o) => lambert_rows(&mut rows, "lambert-a", &o),
        Err(e) => skip("lambert-a", e.to_string()),
    }
    match lambert_scenario_b(&lambert, &tof, &file.theta_grid()?) {
        Ok(o) => lambert_rows(&mut rows, "lambert-b", &o),
        Err(e) => skip("lambert-b", e.to_string()),
    }
    if file.options.lambert_free_departure == Some(true) {
        let (tof, theta) = file.free_departure_grids()?;
        match lambert_free_departure(&lambert, &tof, &theta) {
            Ok(o) => lambert_rows(&mut rows, "lambert-b-free", &o),
            Err(e) => skip("lambert-b-free", e.to_string()),
        }
    }

    let mut csv = String::from("method,variant,impulses,jc,jm,time_s,smooth\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.method,
            r.variant,
            r.impulses,
            format_g(r.j_c),
            format_g(r.j_m),
            format_g(r.time_s),
            r.smooth
        ));
    }
    Ok(vec![
        report(Command::Compare, file, Outcome::Compare { rows, skipped }),
        ("compare.csv", csv.into_bytes()),
    ])
}

fn sample_cmd(file: &ScenarioFile) -> Result<Vec<Output>, CliError> {
    let g = file.grav()?;
    let (outcome, csv) = match file.method {
        Method::Variational => {
            let (profile, span, step) = file.decay()?;
            let history = propagate_decay(&file.initial_orbit()?, &profile, span, step)?;
            let csv = sample::decay_csv(&history);
            let outcome = Outcome::Decay(DecayOut::from(&history));
            (outcome, csv)
        }
        Method::LambertA | Method::LambertB => {
            let o = if file.method == Method::LambertA {
                lambert_scenario_a(&file.omega2_family()?, &file.tof_grid()?)?
            } else {
                lambert_b(file)?
            };
            let csv = sample::lambert_csv(&file.initial_orbit()?, &file.final_orbit()?, &o.best_ce);
            (Outcome::Lambert(LambertOut::from(&o)), csv)
        }
        Method::Single => {
            let solutions = single_chainless(file)?;
            let csv = sample::single_csv(
                &file.initial_orbit()?,
                &file.final_orbit()?,
                file.theta_dep(),
                &solutions,
            );
            let outcome = Outcome::Single {
                solutions: solutions.iter().map(ScheduleOut::from).collect(),
            };
            (outcome, csv)
        }
        _ => {
            let (chain, diag) = match file.method {
                Method::Sbgm => {
                    let (_, swept) = file.adjustables()?;
                    if swept.is_empty() {
                        sbgm_chain(file)?
                    } else {
                        // Plot the control-effort optimum of the sweep.
                        let r = run_sweep(file)?;
                        let best = r.optimum_ce.ok_or(CliError::Solve(sbgm::Error::AllGridPointsFailed))?;
                        (best.chain, None)
                    }
                }
                Method::Hohmann => {
                    let (r1, r2) = circular_radii(file)?;
                    (hohmann(r1, r2, &g)?, None)
                }
                Method::Bielliptic => {
                    let (r1, r2) = circular_radii(file)?;
                    (bi_elliptic(r1, r_mid(file)?, r2, &g)?, None)
                }
                _ => {
                    let sol = two_impulse_perigee(&file.initial_orbit()?, &file.final_orbit()?, &g)?;
                    (sol.chain, Some(DiagnosticsOut::from(&sol.diagnostics)))
                }
            };
            let csv = sample::chain_csv(&chain);
            (chain_outcome(&chain, diag), csv)
        }
    };
    Ok(vec![
        report(Command::Sample, file, outcome),
        ("trajectory.csv", csv.into_bytes()),
    ])
}
