//! Subcommand implementations. Each writes its report to `out`.

use std::fs;
use std::io::Write;
use std::path::Path;

use coherent_keyrate::coherence::rel_entropy_coherence;
use coherent_keyrate::entanglement::{
    concurrence, devetak_winter_privacy, entanglement_of_formation, hashing_bound,
    max_keyrate_over_bases,
};
use coherent_keyrate::finegrained::{bb84_opt_keyrate, sixstate_opt_keyrate};
use coherent_keyrate::keyrate::{
    bb84_keyrate, bb84_worstcase_state, error_rates, keyrate_symmetric, sixstate_keyrate,
};
use coherent_keyrate::mismatch::{mismatch_keyrate, mismatch_pipeline};
use coherent_keyrate::qecsim::{classical_ec_outcome, virtual_qec_outcome};
use coherent_keyrate::qstate::{bell_weights, parse_state_file, partial_dephase};
use coherent_keyrate::sweep::{sweep_alpha, sweep_mismatch};
use coherent_keyrate::{
    BasisLabel, BasisSearchConfig, DetectorModel, FineGrainedStats, HashingMatrix, KeyRateReport,
    SweepRange, TwoQubitState,
};

use crate::args::{
    AnalyzeArgs, KeyrateArgs, ProtocolArg, QecDemoArgs, SweepAlphaArgs, SweepMismatchArgs,
};
use crate::error::{CliError, CliResult};
use crate::format::{format_number as num, write_csv, write_records};
use crate::svg::{Chart, Series};

pub const ALPHA_HEADER: [&str; 5] = ["alpha", "K_bb84", "K_bb84_opt", "K_six", "K_six_opt"];
pub const MISMATCH_HEADER: [&str; 4] = ["x", "K", "K1", "K2"];

fn need<T: Copy>(value: Option<T>, what: &str, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{what} needs {flag}")))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_state(path: &Path) -> CliResult<TwoQubitState> {
    let text = read_file(path)?;
    parse_state_file(&text).map_err(|e| CliError::in_context(path.display().to_string(), e))
}

fn detector(eta0: Option<f64>, eta1: Option<f64>) -> CliResult<Option<DetectorModel>> {
    match (eta0, eta1) {
        (None, None) => Ok(None),
        (Some(a), Some(b)) => Ok(Some(DetectorModel::new(a, b)?)),
        _ => Err(CliError::Usage("--eta0 and --eta1 go together".into())),
    }
}

/// Diagonal from `--m`, or from `--alpha` with the unbalance convention
/// `(alpha(1-e), (1-alpha)e, alpha e, (1-alpha)(1-e))`, or balanced.
fn diagonal(args: &KeyrateArgs, e: f64) -> CliResult<[f64; 4]> {
    if let Some(m) = &args.m {
        return <[f64; 4]>::try_from(m.as_slice())
            .map_err(|_| CliError::Usage(format!("--m takes 4 values, got {}", m.len())));
    }
    let a = args.alpha.unwrap_or(0.5);
    Ok([a * (1.0 - e), (1.0 - a) * e, a * e, (1.0 - a) * (1.0 - e)])
}

pub fn keyrate_report(args: &KeyrateArgs) -> CliResult<KeyRateReport> {
    let protocol = args.protocol.ok_or_else(|| {
        CliError::Usage("keyrate needs a protocol: bb84, bb84-opt, six, six-opt or mismatch".into())
    })?;
    let report = match protocol {
        ProtocolArg::Bb84 => bb84_keyrate(
            need(args.eb, "bb84", "--eb")?,
            need(args.ep, "bb84", "--ep")?,
        )?,
        ProtocolArg::Six => sixstate_keyrate(
            need(args.ex, "six", "--ex")?,
            need(args.ey, "six", "--ey")?,
            need(args.ez, "six", "--ez")?,
        )?,
        ProtocolArg::Bb84Opt => {
            let ep = need(args.ep, "bb84-opt", "--ep")?;
            let m = match args.m {
                Some(_) => diagonal(args, 0.0)?,
                None => diagonal(args, need(args.eb, "bb84-opt", "--eb or --m")?)?,
            };
            bb84_opt_keyrate(&FineGrainedStats::new(m, ep)?)?
        }
        ProtocolArg::SixOpt => {
            let ex = need(args.ex, "six-opt", "--ex")?;
            let ey = need(args.ey, "six-opt", "--ey")?;
            let m = match args.m {
                Some(_) => diagonal(args, 0.0)?,
                None => diagonal(args, need(args.ez, "six-opt", "--ez or --m")?)?,
            };
            sixstate_opt_keyrate(&FineGrainedStats::with_six_state(m, ex, ey)?)?
        }
        ProtocolArg::Mismatch => {
            let x = match (args.x, detector(args.eta0, args.eta1)?) {
                (Some(x), None) => x,
                (None, Some(det)) => det.x(),
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage("give either --x or --eta0/--eta1".into()))
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "mismatch needs --x or --eta0/--eta1".into(),
                    ))
                }
            };
            mismatch_keyrate(
                x,
                need(args.ep, "mismatch", "--ep")?,
                need(args.eb, "mismatch", "--eb")?,
            )?
        }
    };
    Ok(report)
}

fn print_witness<W: Write>(out: &mut W, w: &TwoQubitState) -> CliResult<()> {
    let p = bell_weights(w);
    let (ex, ey, ez) = error_rates(w);
    writeln!(
        out,
        "witness Bell weights: {} {} {} {}",
        num(p[0]),
        num(p[1]),
        num(p[2]),
        num(p[3])
    )?;
    writeln!(
        out,
        "witness error rates: e_x={} e_y={} e_z={}",
        num(ex),
        num(ey),
        num(ez)
    )?;
    Ok(())
}

pub fn cmd_keyrate<W: Write>(args: &KeyrateArgs, out: &mut W) -> CliResult<()> {
    let r = keyrate_report(args)?;
    writeln!(out, "protocol: {}", r.protocol)?;
    writeln!(out, "rate: {}", num(r.rate))?;
    writeln!(out, "coherence term: {}", num(r.coherence_term))?;
    writeln!(out, "reconciliation term: {}", num(r.reconciliation_term))?;
    writeln!(
        out,
        "secret key: {}",
        if r.has_key() { "yes" } else { "no" }
    )?;
    if let Some(w) = &r.witness {
        print_witness(out, w)?;
    }
    if let Some(path) = &args.csv {
        let mut buf = Vec::new();
        write_records(
            &mut buf,
            &["protocol", "rate", "coherence_term", "reconciliation_term"],
            &[vec![
                r.protocol.to_string(),
                num(r.rate),
                num(r.coherence_term),
                num(r.reconciliation_term),
            ]],
        )?;
        write_file(path, &buf)?;
    }
    Ok(())
}

fn emit_table<W: Write>(
    out: &mut W,
    csv_path: Option<&Path>,
    header: &[&str],
    rows: &[Vec<f64>],
) -> CliResult<()> {
    match csv_path {
        Some(path) => {
            let mut buf = Vec::new();
            write_csv(&mut buf, header, rows)?;
            write_file(path, &buf)
        }
        None => write_csv(out, header, rows),
    }
}

fn chart_from(
    title: String,
    x_label: &str,
    header: &[&str],
    rows: &[Vec<f64>],
    order: &[usize],
) -> Chart {
    Chart {
        title,
        x_label: x_label.into(),
        y_label: "key rate (bits)".into(),
        x: rows.iter().map(|r| r[0]).collect(),
        series: order
            .iter()
            .map(|&k| Series {
                label: header[k].to_string(),
                y: rows.iter().map(|r| r[k]).collect(),
            })
            .collect(),
    }
}

pub fn alpha_rows(args: &SweepAlphaArgs, jobs: usize) -> CliResult<Vec<Vec<f64>>> {
    let e = args.e.unwrap_or(0.03);
    let range = SweepRange::new(
        args.start.unwrap_or(0.38),
        args.stop.unwrap_or(0.62),
        args.steps.unwrap_or(25),
    )?;
    Ok(sweep_alpha(e, &range, jobs)?
        .into_iter()
        .map(|r| vec![r.alpha, r.k_bb84, r.k_bb84_opt, r.k_six, r.k_six_opt])
        .collect())
}

pub fn cmd_sweep_alpha<W: Write>(args: &SweepAlphaArgs, jobs: usize, out: &mut W) -> CliResult<()> {
    let rows = alpha_rows(args, jobs)?;
    emit_table(out, args.out.as_deref(), &ALPHA_HEADER, &rows)?;
    if let Some(path) = &args.svg {
        let title = format!("Key rate versus alpha, e = {}", args.e.unwrap_or(0.03));
        let chart = chart_from(title, "alpha", &ALPHA_HEADER, &rows, &[4, 3, 2, 1]);
        write_file(path, chart.render()?.as_bytes())?;
    }
    Ok(())
}

pub fn mismatch_rows(args: &SweepMismatchArgs, jobs: usize) -> CliResult<Vec<Vec<f64>>> {
    let range = SweepRange::new(
        args.start.unwrap_or(0.01),
        args.stop.unwrap_or(0.5),
        args.steps.unwrap_or(50),
    )?;
    let (ep, eb) = (args.ep.unwrap_or(0.05), args.eb.unwrap_or(0.05));
    Ok(sweep_mismatch(ep, eb, &range, jobs)?
        .into_iter()
        .map(|r| vec![r.x, r.k, r.k1, r.k2])
        .collect())
}

pub fn cmd_sweep_mismatch<W: Write>(
    args: &SweepMismatchArgs,
    jobs: usize,
    out: &mut W,
) -> CliResult<()> {
    let rows = mismatch_rows(args, jobs)?;
    emit_table(out, args.out.as_deref(), &MISMATCH_HEADER, &rows)?;
    if let Some(path) = &args.svg {
        let title = format!(
            "Key rate versus x, e_p = {}, e_b = {}",
            args.ep.unwrap_or(0.05),
            args.eb.unwrap_or(0.05)
        );
        let chart = chart_from(title, "x", &MISMATCH_HEADER, &rows, &[1, 2, 3]);
        write_file(path, chart.render()?.as_bytes())?;
    }
    Ok(())
}

fn line<W: Write>(out: &mut W, label: &str, value: coherent_keyrate::Result<f64>) -> CliResult<()> {
    match value {
        Ok(v) => writeln!(out, "{label}: {}", num(v))?,
        Err(e) => writeln!(out, "{label}: n/a ({e})")?,
    }
    Ok(())
}

pub fn cmd_analyze<W: Write>(args: &AnalyzeArgs, out: &mut W) -> CliResult<()> {
    let path = args
        .file
        .as_deref()
        .ok_or_else(|| CliError::Usage("analyze needs a state file".into()))?;
    let rho = load_state(path)?;
    let det = detector(args.eta0, args.eta1)?;
    let (ex, ey, ez) = error_rates(&rho);
    let diag = rho.diagonal();

    writeln!(out, "state: {}", path.display())?;
    writeln!(
        out,
        "error rates: e_x={} e_y={} e_z={}",
        num(ex),
        num(ey),
        num(ez)
    )?;
    writeln!(
        out,
        "Z outcome probabilities: {} {} {} {}",
        num(diag[0]),
        num(diag[1]),
        num(diag[2]),
        num(diag[3])
    )?;
    line(
        out,
        "coherence C(Phi(rho))",
        rel_entropy_coherence(&partial_dephase(&rho), BasisLabel::Z),
    )?;
    line(
        out,
        "key rate K(rho)",
        keyrate_symmetric(&rho).map(|r| r.rate),
    )?;
    line(out, "BB84 rate", bb84_keyrate(ez, ex).map(|r| r.rate))?;
    line(
        out,
        "six-state rate",
        sixstate_keyrate(ex, ey, ez).map(|r| r.rate),
    )?;
    line(
        out,
        "fine-grained BB84 rate",
        FineGrainedStats::new(diag, ex)
            .and_then(|s| bb84_opt_keyrate(&s))
            .map(|r| r.rate),
    )?;
    line(
        out,
        "fine-grained six-state rate",
        FineGrainedStats::with_six_state(diag, ex, ey)
            .and_then(|s| sixstate_opt_keyrate(&s))
            .map(|r| r.rate),
    )?;
    line(out, "hashing bound", hashing_bound(&rho))?;
    line(
        out,
        "Devetak-Winter privacy",
        devetak_winter_privacy(&partial_dephase(&rho)),
    )?;
    let cfg = BasisSearchConfig {
        restarts: args
            .restarts
            .unwrap_or(BasisSearchConfig::default().restarts),
        seed: args.seed.unwrap_or(BasisSearchConfig::default().seed),
        ..Default::default()
    };
    line(
        out,
        "basis-optimized rate K^m",
        max_keyrate_over_bases(&rho, &cfg).map(|r| r.rate),
    )?;
    line(out, "concurrence", concurrence(&rho))?;
    line(
        out,
        "entanglement of formation",
        entanglement_of_formation(&rho),
    )?;

    if let Some(det) = det {
        let a = mismatch_pipeline(&rho, &det)?;
        writeln!(
            out,
            "detectors: eta0={} eta1={} x={}",
            num(det.eta0()),
            num(det.eta1()),
            num(det.x())
        )?;
        writeln!(out, "Gamma: {}", num(a.gamma))?;
        writeln!(out, "Gamma': {}", num(a.gamma_prime))?;
        writeln!(out, "e_p'': {}", num(a.e_p_double_prime))?;
        writeln!(out, "e_p': {}", num(a.e_p_prime))?;
        writeln!(out, "e_b (filtered): {}", num(a.e_b))?;
        writeln!(out, "mismatch rate: {}", num(a.report.rate))?;
    }
    Ok(())
}

pub fn cmd_qec_demo<W: Write>(args: &QecDemoArgs, out: &mut W) -> CliResult<()> {
    let n = args.n.unwrap_or(3);
    let h = match &args.hashing {
        Some(path) => HashingMatrix::parse(&read_file(path)?)
            .map_err(|e| CliError::in_context(path.display().to_string(), e))?,
        None => HashingMatrix::default_2x3(),
    };
    let rho = match &args.state {
        Some(path) => load_state(path)?,
        None => bb84_worstcase_state(args.eb.unwrap_or(0.1), args.ep.unwrap_or(0.0))?,
    };
    let classical = classical_ec_outcome(&rho, n, &h)?;
    let virtual_ = virtual_qec_outcome(&rho, n, &h)?;

    writeln!(out, "pairs: {n}")?;
    writeln!(out, "hashing matrix:")?;
    for row in h.to_string().lines() {
        writeln!(out, "  {row}")?;
    }
    writeln!(out, "syndrome  classical  virtual")?;
    let width = h.rows();
    for (s, (pc, pv)) in classical
        .syndromes
        .iter()
        .zip(&virtual_.syndromes)
        .enumerate()
    {
        writeln!(out, "  {s:0width$b}  {}  {}", num(*pc), num(*pv))?;
    }
    writeln!(
        out,
        "residual mismatch (classical): {}",
        num(classical.keys.mismatch_probability())
    )?;
    writeln!(
        out,
        "residual mismatch (virtual): {}",
        num(virtual_.keys.mismatch_probability())
    )?;
    writeln!(
        out,
        "total variation: {}",
        num(classical.keys.total_variation(&virtual_.keys))
    )?;
    Ok(())
}
