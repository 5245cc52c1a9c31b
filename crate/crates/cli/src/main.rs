use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptmetro::dynamics::DEFAULT_DT;
use ptmetro::estimation::{classical_fisher_projective, drho_dgamma, qfi_closed_2x2, qfi_spectral};
use ptmetro::probes::{probe_oracle_terms, qfi_probe_closed};
use ptmetro::{
    default_step, eigenstates_heff, evolve_probe, fisher_projective_closed, integrate_master, optimal_theta,
    precision_bound, qfi_eigenstate, AnalyticSolution, DensityMatrix, FeedbackFamily, Ket2, NoFeedbackFamily,
    StateFamily,
};
use ptmetro_cli::figures::figure;
use ptmetro_cli::output::{gnuplot_script, write_series, Sidecar};
use ptmetro_cli::scan::eigenstate_step;
use ptmetro_cli::verify::run_all;
use ptmetro_cli::{run_scan, Axis, CliError, Model, ParamLayer, Params, Quantity, ScanSpec};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "ptmetro",
    version,
    about = "Damping-rate metrology with PT-symmetric feedback and no-jump probes"
)]
struct Cli {
    /// Evaluate grid points on one thread (output is identical either way).
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    params: ParamLayer,
    /// JSON file with parameter defaults; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<Params, CliError> {
        Params::resolve(&self.params, self.config.as_deref())
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory for CSV and JSON files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV files.
    #[arg(long)]
    emit_plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write the two series of a figure (line A with feedback, line B without).
    Fig {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=7))]
        id: u8,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate one quantity on a grid; CSV to stdout unless --out is given.
    Scan {
        #[arg(long, value_enum, default_value = "feedback")]
        model: Model,
        #[arg(long, value_enum, default_value = "F")]
        quantity: Quantity,
        /// Scanned variable; --t-min/--t-max/--points set its range.
        #[arg(long, value_enum, default_value = "t")]
        axis: Axis,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Density matrix at time --t (closed form, or RK4 when driven or with --rk4).
    Evolve {
        #[arg(long)]
        rk4: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Fisher information of the feedback model at (--gamma, --t).
    Qfi {
        #[command(flatten)]
        common: Common,
    },
    /// Entangled no-jump probe: state, QFI, bound and optimal angle.
    Probe {
        #[command(flatten)]
        common: Common,
    },
    /// Eigenstates of the effective Hamiltonian and their QFI.
    Eigen {
        #[command(flatten)]
        common: Common,
    },
    /// Run every cross-check; exits 1 if any fails.
    Verify {
        /// Also write the report as verify.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let parallel = !cli.sequential;
    let result = match cli.command {
        Command::Fig { id, common, output } => cmd_fig(id, &common, &output, parallel),
        Command::Scan {
            model,
            quantity,
            axis,
            common,
            output,
        } => cmd_scan(model, quantity, axis, &common, &output, parallel),
        Command::Evolve { rk4, common } => cmd_evolve(rk4, &common),
        Command::Qfi { common } => cmd_qfi(&common),
        Command::Probe { common } => cmd_probe(&common),
        Command::Eigen { common } => cmd_eigen(&common),
        Command::Verify { out } => cmd_verify(out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ptmetro: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.into()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_fig(id: u8, common: &Common, output: &OutputArgs, parallel: bool) -> Result<ExitCode, CliError> {
    let params = common.resolve()?;
    let grid = params.grid()?;
    let data = figure(id, &grid, parallel)?;
    let dir = output.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let q = data.spec.quantity.name();
    let meta = json!({
        "figure": id,
        "caption": data.spec.caption,
        "a": data.spec.a,
        "b": data.spec.b,
        "gamma": data.spec.gamma,
        "regime": data.spec.regime(),
    });
    let mut files = Vec::new();
    for (tag, series, model) in [("A", &data.line_a, "feedback"), ("B", &data.line_b, "no_feedback")] {
        let sidecar = Sidecar {
            model,
            params: &meta,
            quantity: q,
            axis: "t",
            grid,
            label: &series.label,
            data: &format!("fig{id}_{tag}.csv"),
        };
        files.push(write_series(&dir, &format!("fig{id}_{tag}"), series, &sidecar)?);
    }
    if output.emit_plot {
        let lines = [
            (format!("fig{id}_A.csv"), "A: with feedback".to_string()),
            (format!("fig{id}_B.csv"), "B: without feedback".to_string()),
        ];
        let script = gnuplot_script(&format!("Fig. {id}: {}", data.spec.caption), "t", q, &lines);
        let path = dir.join(format!("fig{id}.gp"));
        std::fs::write(&path, script)?;
        files.push(path);
    }
    print_json(&json!({
        "figure": id,
        "caption": data.spec.caption,
        "regime": data.spec.regime().name(),
        "quantity": q,
        "peaks_a": data.line_a.local_maxima().iter().map(|&i| data.line_a.grid[i]).collect::<Vec<_>>(),
        "peaks_b": data.line_b.local_maxima().iter().map(|&i| data.line_b.grid[i]).collect::<Vec<_>>(),
        "files": files,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(
    model: Model,
    quantity: Quantity,
    axis: Axis,
    common: &Common,
    output: &OutputArgs,
    parallel: bool,
) -> Result<ExitCode, CliError> {
    let params = common.resolve()?;
    let spec = ScanSpec {
        model,
        axis,
        quantity,
        params,
        grid: params.grid()?,
    };
    let series = run_scan(&spec, parallel)?;
    match &output.out {
        None => {
            let csv = ptmetro_cli::output::csv_string(&series, axis.column(), quantity.name());
            std::io::stdout().lock().write_all(csv.as_bytes())?;
        }
        Some(dir) => {
            let model_name = serde_json::to_value(model)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            let stem = format!("scan_{model_name}_{}", quantity.name());
            let sidecar = Sidecar {
                model: &model_name,
                params: &params,
                quantity: quantity.name(),
                axis: axis.column(),
                grid: spec.grid,
                label: &series.label,
                data: &format!("{stem}.csv"),
            };
            let path = write_series(dir, &stem, &series, &sidecar)?;
            if output.emit_plot {
                let lines = [(format!("{stem}.csv"), series.label.clone())];
                std::fs::write(
                    dir.join(format!("{stem}.gp")),
                    gnuplot_script(&stem, axis.column(), quantity.name(), &lines),
                )?;
            }
            println!("{}", path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn matrix_json(rho: &DensityMatrix) -> Value {
    let m = rho.matrix();
    json!([
        [[m[(0, 0)].re, m[(0, 0)].im], [m[(0, 1)].re, m[(0, 1)].im]],
        [[m[(1, 0)].re, m[(1, 0)].im], [m[(1, 1)].re, m[(1, 1)].im]],
    ])
}

fn cmd_evolve(rk4: bool, common: &Common) -> Result<ExitCode, CliError> {
    let p = common.resolve()?;
    let cfg = p.feedback()?;
    let (rho, method) = if rk4 || cfg.omega != 0.0 {
        (
            integrate_master(&cfg, &DensityMatrix::plus_state(), p.t, DEFAULT_DT)?,
            "rk4",
        )
    } else {
        (AnalyticSolution::new(&cfg)?.state(p.t)?, "closed_form")
    };
    print_json(&json!({
        "t": p.t,
        "a": cfg.a,
        "b": cfg.b,
        "gamma": cfg.gamma,
        "omega": cfg.omega,
        "regime": cfg.regime(),
        "method": method,
        "basis": ["g", "e"],
        "rho11": rho.rho11(),
        "rho12": [rho.rho12().re, rho.rho12().im],
        "purity": rho.purity(),
        "rho": matrix_json(&rho),
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_qfi(common: &Common) -> Result<ExitCode, CliError> {
    let p = common.resolve()?;
    let cfg = p.feedback()?;
    if cfg.omega != 0.0 {
        return Err(CliError::Usage(
            "Fisher information is only available for omega = 0".into(),
        ));
    }
    let family = FeedbackFamily::from_config(&cfg);
    let h = default_step(cfg.gamma);
    let rho = family.state(cfg.gamma, p.t)?;
    let d = drho_dgamma(&family, cfg.gamma, p.t, h)?;
    let closed = match qfi_closed_2x2(&rho, &d) {
        Ok(v) => json!(v),
        Err(e) => json!({ "refused": e.to_string() }),
    };
    let (ea, eb) = cfg.effective_ab();
    let sol = AnalyticSolution::new(&cfg)?;
    let baseline = drho_dgamma(&NoFeedbackFamily, cfg.gamma, p.t, h)
        .and_then(|db| NoFeedbackFamily.state(cfg.gamma, p.t).map(|rb| qfi_spectral(&rb, &db)))?;
    print_json(&json!({
        "t": p.t,
        "gamma": cfg.gamma,
        "a": cfg.a,
        "b": cfg.b,
        "regime": cfg.regime(),
        "feedback_factor": sol.feedback_factor(),
        "qfi_spectral": qfi_spectral(&rho, &d),
        "qfi_closed_2x2": closed,
        "classical_projective": classical_fisher_projective(&family, cfg.gamma, p.t, h)?.value,
        "classical_projective_closed": fisher_projective_closed(ea, eb, cfg.gamma, p.t),
        "qfi_no_feedback": baseline,
        "step": h,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_probe(common: &Common) -> Result<ExitCode, CliError> {
    let p = common.resolve()?;
    let cfg = p.probe()?;
    let state = evolve_probe(&cfg)?;
    let closed = qfi_probe_closed(&cfg)?;
    let oracle = probe_oracle_terms(&cfg, default_step(cfg.gamma))?.qfi();
    let bound = match precision_bound(&cfg) {
        Ok(v) => json!(v),
        Err(e) => json!({ "refused": e.to_string() }),
    };
    let optimal = match optimal_theta(cfg.n_qubits, cfg.gamma, cfg.t) {
        Ok(o) => serde_json::to_value(o).map_err(|e| CliError::Io(e.into()))?,
        Err(e) => json!({ "refused": e.to_string() }),
    };
    print_json(&json!({
        "config": cfg,
        "gamma_n_t": cfg.decay_exponent(),
        "state": state,
        "qfi_closed": closed,
        "qfi_oracle": oracle,
        "oracle_over_closed": if closed > 0.0 { json!(oracle / closed) } else { Value::Null },
        "precision_bound": bound,
        "optimal": optimal,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn ket_json(k: &Ket2) -> Value {
    json!([[k.0[0].re, k.0[0].im], [k.0[1].re, k.0[1].im]])
}

fn cmd_eigen(common: &Common) -> Result<ExitCode, CliError> {
    let p = common.resolve()?;
    let pair = eigenstates_heff(p.omega, p.gamma)?;
    let qfi = if p.omega > p.gamma {
        match qfi_eigenstate(p.omega, p.gamma, eigenstate_step(p.omega, p.gamma)) {
            Ok(q) => serde_json::to_value(q).map_err(|e| CliError::Io(e.into()))?,
            Err(e) => json!({ "refused": e.to_string() }),
        }
    } else if pair.coalesced {
        json!({ "refused": "exceptional point: QFI diverges" })
    } else {
        json!({ "refused": "requires omega > gamma" })
    };
    print_json(&json!({
        "omega": p.omega,
        "gamma": p.gamma,
        "psi_minus": ket_json(&pair.minus),
        "psi_plus": ket_json(&pair.plus),
        "lambda_minus": [pair.lambda_minus.re, pair.lambda_minus.im],
        "lambda_plus": [pair.lambda_plus.re, pair.lambda_plus.im],
        "coalesced": pair.coalesced,
        "qfi": qfi,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(out: Option<&Path>) -> Result<ExitCode, CliError> {
    let report = run_all();
    print_json(&report)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.into()))?;
        std::fs::write(dir.join("verify.json"), text + "\n")?;
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
