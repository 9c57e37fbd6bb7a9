//! The `compute` subcommand: one input file in, one artifact per target
//! out.
//!
//! The input schema is auto-detected from its keys: a coefficient
//! sequence carries `alphas`, a grid measure carries `grid_size` and
//! `ac_weight`, Jacobi parameters carry `a` and `b`. Whatever the input,
//! a coefficient view is derived first (measures through their moments,
//! Jacobi parameters through the inverse coefficient map) and each target
//! is computed from there, so the artifacts stay consistent with one
//! another.

use crate::{resolve, write_artifact, ConfigArgs, Failure, OutputFormat, RunConfig};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use opuc::cmv::{build_cmv, phi_zeros};
use opuc::periodic::{band_structure, PeriodicSpec};
use opuc::schur::schur_function_of;
use opuc::szego::szego_forward;
use opuc::szego_map::{geronimus_forward, geronimus_inverse, JacobiParams};
use opuc::synthesis::{bernstein_szego, bs_moments};
use opuc::asymptotics::szego_report;
use opuc::{CircleMeasure, MomentSeq, VerblunskySeq};
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Args, Debug)]
#[command(
    about = "Compute artifacts from a coefficient, measure, or Jacobi input file",
    long_about = "Compute artifacts from one input file.\n\n\
The input is JSON and its schema is auto-detected:\n  \
coefficient sequence  {\"alphas\": [[re,im], ...]}\n  \
circle measure        {\"grid_size\": M, \"ac_weight\": [...], \"point_masses\": [...]}\n  \
Jacobi parameters     {\"a\": [...], \"b\": [...]}\n\n\
One artifact file per target is written to the output directory \
(--out, else $OPUC_OUT_DIR, else the working directory), named \
<target>.<format>.\n\n\
CSV columns per target:\n  \
phi           k,re,im           monic coefficients, low to high\n  \
zeros         index,re,im       zeros sorted by (re, im)\n  \
moments       n,re,im           moments c_0 ..= c_max_n\n  \
schur         kind,k,re,im      kind is 'parameter' or 'series'\n  \
cmv           row,col,re,im     nonzero five-diagonal entries, row-major\n  \
bands         kind,x,y,mass     kind is 'band' or 'gap'; gap mass is empty\n  \
jacobi        m,a,b             off-diagonal a_m and diagonal b_m, m from 1\n  \
szego-report  field,index,value d rows are indexed; scalar rows have an empty index"
)]
pub struct ComputeArgs {
    /// Input JSON file (schema auto-detected).
    #[arg(long)]
    input: PathBuf,

    /// Targets to emit (repeatable or comma-separated).
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    target: Vec<Target>,

    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Phi,
    Zeros,
    Moments,
    Schur,
    Cmv,
    Bands,
    Jacobi,
    SzegoReport,
}

impl Target {
    fn stem(self) -> &'static str {
        match self {
            Target::Phi => "phi",
            Target::Zeros => "zeros",
            Target::Moments => "moments",
            Target::Schur => "schur",
            Target::Cmv => "cmv",
            Target::Bands => "bands",
            Target::Jacobi => "jacobi",
            Target::SzegoReport => "szego-report",
        }
    }
}

/// The parsed input file.
enum Source {
    Coefficients(VerblunskySeq),
    Measure(CircleMeasure),
    Jacobi(JacobiParams),
}

fn detect(text: &str) -> Result<Source, Failure> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Failure::Input(format!("input is not valid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::Input("input must be a JSON object".into()))?;
    if obj.contains_key("alphas") {
        let seq: VerblunskySeq = serde_json::from_value(value.clone())
            .map_err(|e| Failure::Input(format!("coefficient input rejected: {e}")))?;
        Ok(Source::Coefficients(seq))
    } else if obj.contains_key("grid_size") && obj.contains_key("ac_weight") {
        let mu: CircleMeasure = serde_json::from_value(value.clone())
            .map_err(|e| Failure::Input(format!("measure input rejected: {e}")))?;
        Ok(Source::Measure(mu))
    } else if obj.contains_key("a") && obj.contains_key("b") {
        let j: JacobiParams = serde_json::from_value(value.clone())
            .map_err(|e| Failure::Input(format!("Jacobi input rejected: {e}")))?;
        Ok(Source::Jacobi(j))
    } else {
        Err(Failure::Input(
            "unrecognized input schema: expected keys 'alphas', or 'grid_size' + 'ac_weight', \
             or 'a' + 'b'"
                .into(),
        ))
    }
}

/// The coefficient view every target computes from.
fn coefficients(source: &Source, rc: &RunConfig) -> Result<VerblunskySeq, Failure> {
    match source {
        Source::Coefficients(seq) => {
            if seq.is_terminal() {
                return Err(Failure::Input(
                    "terminal sequences (unimodular last entry) are not supported by compute; \
                     drop the terminal entry"
                        .into(),
                ));
            }
            Ok(seq.clone())
        }
        Source::Measure(mu) => {
            let c = mu.moments(rc.suite.max_n)?;
            Ok(VerblunskySeq::from_moments(&c, rc.suite.max_n)?)
        }
        Source::Jacobi(j) => Ok(geronimus_inverse(j)?),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn run(args: &ComputeArgs) -> Result<ExitCode, Failure> {
    let rc = resolve(&args.config)?;
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.input.display())))?;
    let source = detect(&text)?;
    let alpha = coefficients(&source, &rc)?;

    let mut done = Vec::new();
    for &target in &args.target {
        if done.contains(&target) {
            continue;
        }
        done.push(target);
        let body = render(target, &source, &alpha, &rc)?;
        write_artifact(&rc.out_dir, target.stem(), rc.format, &body)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn render(
    target: Target,
    source: &Source,
    alpha: &VerblunskySeq,
    rc: &RunConfig,
) -> Result<String, Failure> {
    match target {
        Target::Phi => phi_body(alpha, rc),
        Target::Zeros => zeros_body(alpha, rc),
        Target::Moments => moments_body(source, alpha, rc),
        Target::Schur => schur_body(alpha, rc),
        Target::Cmv => cmv_body(alpha, rc),
        Target::Bands => bands_body(alpha, rc),
        Target::Jacobi => jacobi_body(source, alpha, rc),
        Target::SzegoReport => szego_report_body(source, alpha, rc),
    }
}

fn to_json_body(value: &serde_json::Value) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn phi_body(alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let n = alpha.len();
    let fam = szego_forward(alpha)?;
    let phi = fam.phi(n);
    match rc.format {
        OutputFormat::Json => to_json_body(&json!({
            "degree": n,
            "coefficients": (0..=n).map(|k| pair(phi.coeff(k))).collect::<Vec<_>>(),
            "norm": fam.norm(n),
        })),
        OutputFormat::Csv => {
            let mut s = String::from("k,re,im\n");
            for k in 0..=n {
                let c = phi.coeff(k);
                writeln!(s, "{k},{},{}", c.re, c.im).unwrap();
            }
            Ok(s)
        }
    }
}

fn zeros_body(alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let n = alpha.len();
    let mut zs = phi_zeros(alpha, n)?;
    zs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    match rc.format {
        OutputFormat::Json => to_json_body(&json!({
            "degree": n,
            "zeros": zs.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => {
            let mut s = String::from("index,re,im\n");
            for (i, z) in zs.iter().enumerate() {
                writeln!(s, "{i},{},{}", z.re, z.im).unwrap();
            }
            Ok(s)
        }
    }
}

fn moments_body(source: &Source, alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let n_max = rc.suite.max_n;
    let c: MomentSeq = match source {
        Source::Measure(mu) => mu.moments(n_max)?,
        _ => bs_moments(alpha, alpha.len(), n_max)?,
    };
    match rc.format {
        OutputFormat::Json => to_json_body(&json!({
            "moments": c.as_slice().iter().map(|&v| pair(v)).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => {
            let mut s = String::from("n,re,im\n");
            for (n, v) in c.as_slice().iter().enumerate() {
                writeln!(s, "{n},{},{}", v.re, v.im).unwrap();
            }
            Ok(s)
        }
    }
}

fn schur_body(alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let f = schur_function_of(alpha, rc.suite.series_order)?;
    let series = f.series().coeffs();
    match rc.format {
        OutputFormat::Json => to_json_body(&json!({
            "parameters": alpha.alphas().iter().map(|&a| pair(a)).collect::<Vec<_>>(),
            "series": series.iter().map(|&v| pair(v)).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => {
            let mut s = String::from("kind,k,re,im\n");
            for (k, a) in alpha.alphas().iter().enumerate() {
                writeln!(s, "parameter,{k},{},{}", a.re, a.im).unwrap();
            }
            for (k, v) in series.iter().enumerate() {
                writeln!(s, "series,{k},{},{}", v.re, v.im).unwrap();
            }
            Ok(s)
        }
    }
}

fn cmv_body(alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let n = alpha.len();
    if n == 0 {
        return Err(Failure::Input(
            "the cmv target needs at least one coefficient".into(),
        ));
    }
    let m = build_cmv(alpha, n)?;
    let entries = m.band_entries();
    match rc.format {
        OutputFormat::Json => to_json_body(&json!({
            "size": n,
            "entries": serde_json::to_value(&entries)
                .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?,
        })),
        OutputFormat::Csv => {
            let mut s = String::from("row,col,re,im\n");
            for e in &entries {
                writeln!(s, "{},{},{},{}", e.row, e.col, e.value.re, e.value.im).unwrap();
            }
            Ok(s)
        }
    }
}

fn bands_body(alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let spec = PeriodicSpec::new(alpha.alphas().to_vec())?;
    let p = spec.period();
    let structure = band_structure(&spec, rc.suite.grid_size)?;
    let capacity = spec.rho_product().powf(1.0 / p as f64);
    match rc.format {
        OutputFormat::Json => to_json_body(&json!({
            "period": p,
            "bands": serde_json::to_value(&structure.bands)
                .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?,
            "gaps": serde_json::to_value(&structure.gaps)
                .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?,
            "capacity": capacity,
        })),
        OutputFormat::Csv => {
            let mut s = String::from("kind,x,y,mass\n");
            for b in &structure.bands {
                writeln!(s, "band,{},{},{}", b.x, b.y, b.mass).unwrap();
            }
            for g in &structure.gaps {
                writeln!(s, "gap,{},{},", g.x, g.y).unwrap();
            }
            Ok(s)
        }
    }
}

fn jacobi_body(source: &Source, alpha: &VerblunskySeq, rc: &RunConfig) -> Result<String, Failure> {
    let params = match source {
        Source::Jacobi(j) => j.clone(),
        _ => geronimus_forward(alpha)?,
    };
    match rc.format {
        OutputFormat::Json => to_json_body(
            &serde_json::to_value(&params)
                .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?,
        ),
        OutputFormat::Csv => {
            let mut s = String::from("m,a,b\n");
            for (i, (a, b)) in params.a().iter().zip(params.b()).enumerate() {
                writeln!(s, "{},{a},{b}", i + 1).unwrap();
            }
            Ok(s)
        }
    }
}

fn szego_report_body(
    source: &Source,
    alpha: &VerblunskySeq,
    rc: &RunConfig,
) -> Result<String, Failure> {
    let mu = match source {
        Source::Measure(mu) => mu.clone(),
        _ => bernstein_szego(alpha, alpha.len(), rc.suite.grid_size)?,
    };
    let report = szego_report(&mu, rc.suite.max_n)?;
    match rc.format {
        OutputFormat::Json => to_json_body(
            &serde_json::to_value(&report)
                .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?,
        ),
        OutputFormat::Csv => {
            let mut s = String::from("field,index,value\n");
            for (i, d) in report.d.iter().enumerate() {
                writeln!(s, "d,{i},{d}").unwrap();
            }
            writeln!(s, "f_limit,,{}", report.f_limit).unwrap();
            match report.g_limit {
                Some(g) => writeln!(s, "g_limit,,{g}").unwrap(),
                None => writeln!(s, "g_limit,,").unwrap(),
            }
            writeln!(s, "entropy,,{}", report.entropy).unwrap();
            writeln!(s, "strong_sum,,{}", report.strong_sum).unwrap();
            Ok(s)
        }
    }
}
