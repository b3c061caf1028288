//! Batch front end: load JSON descriptors, run constructions and
//! verifications, emit a JSON report on stdout (human-readable summary on
//! stderr). Exit codes: 0 all checks pass, 1 a verification failed or a
//! probe stayed undetermined without --allow-undetermined, 2 malformed or
//! unsupported input.

mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::{RunReport, Status};
use skewlab::abelianchain::{build_abelian_chain, division_probe, DivisionVerdict};
use skewlab::crossed::{
    centralizer_identity_check, crossed_product, decompose_chain, q_central_element,
    validate_cocycle,
};
use skewlab::descriptor::{
    parse_scalars, render_scalars, sha256_hex, AlgebraDesc, ChainArtifact, ChainBuildDesc,
    CrossedArtifact, CyclicArtifact, CyclicDesc, FactorSetDesc,
};
use skewlab::groups::SolvableSeries;
use skewlab::skewpoly::{norm_condition_witness, SearchSpec, WitnessOutcome};
use skewlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "skewlab",
    about = "Exact crossed product algebras: build, decompose, verify, probe",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the 2-cocycle identity on all triples of a factor-set file
    ValidateCocycle { file: PathBuf },
    /// Build an algebra artifact from a descriptor
    Build {
        file: PathBuf,
        #[arg(long)]
        kind: BuildKind,
        /// write the artifact JSON here (atomically)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a crossed-product artifact along a solvable series
    Decompose {
        file: PathBuf,
        /// "auto" (composition series) or a path to a series file
        #[arg(long, default_value = "auto")]
        series: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the norm-condition division probe on a chain artifact
    ProbeDivision {
        file: PathBuf,
        #[arg(long, conflicts_with = "exhaustive")]
        height: Option<u32>,
        #[arg(long)]
        exhaustive: bool,
        /// exit 0 even when the verdict is undetermined
        #[arg(long)]
        allow_undetermined: bool,
    },
    /// Center of an algebra (descriptor or artifact with an "algebra" field)
    Center { file: PathBuf },
    /// Centralizer of a generating set in an algebra
    Centralizer {
        file: PathBuf,
        /// JSON file with an array of coordinate vectors
        #[arg(long)]
        gens: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Crossed,
    Cyclic,
    AbelianChain,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes)
        .map_err(|e| Error::InvalidInput(format!("malformed JSON in {}: {e}", path.display())))?;
    Ok((value, sha256_hex(&bytes)))
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)
        .and_then(|()| std::fs::rename(&tmp, path))
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn record_input(report: &mut RunReport, path: &Path, digest: String) {
    report.inputs.push(report::InputDigest {
        path: path.display().to_string(),
        sha256: digest,
    });
}

fn scalar_vec(coords: &[skewlab::Scalar]) -> String {
    format!("[{}]", render_scalars(coords).join(", "))
}

fn witness_detail(outcome: &WitnessOutcome) -> (Status, String) {
    match outcome {
        WitnessOutcome::Witness { b, norm } => (
            Status::Pass,
            format!("witness b = {} with norm {}", scalar_vec(&b.coords), scalar_vec(&norm.coords)),
        ),
        WitnessOutcome::NoneFound { bound } => (
            Status::Undetermined,
            format!("no witness up to height {bound}"),
        ),
        WitnessOutcome::NoneExhaustive => (Status::Pass, "no witness (exhaustive)".into()),
    }
}

fn cmd_validate_cocycle(file: &Path) -> Result<RunReport> {
    let mut report = RunReport::new("validate-cocycle");
    let (desc, digest): (FactorSetDesc, _) = read_json(file)?;
    record_input(&mut report, file, digest);
    let fs = desc.to_factor_set()?;
    let cocycle = validate_cocycle(&fs)?;
    if cocycle.pass {
        report.record(
            "cocycle",
            Status::Pass,
            format!("{} triples verified", cocycle.checked),
        );
    } else {
        let v = cocycle.violation.expect("failing report names a triple");
        report.record(
            "cocycle",
            Status::Fail,
            format!(
                "first violating triple (σ, τ, ρ) = ({}, {}, {}): lhs {} ≠ rhs {}",
                v.sigma,
                v.tau,
                v.rho,
                scalar_vec(&v.lhs.coords),
                scalar_vec(&v.rhs.coords)
            ),
        );
    }
    Ok(report)
}

fn cmd_build(file: &Path, kind: BuildKind, out: Option<&Path>) -> Result<RunReport> {
    let mut report = RunReport::new("build");
    let artifact: serde_json::Value = match kind {
        BuildKind::Crossed => {
            let (desc, digest): (FactorSetDesc, _) = read_json(file)?;
            record_input(&mut report, file, digest);
            let fs = desc.to_factor_set()?;
            let cocycle = validate_cocycle(&fs)?;
            if !cocycle.pass {
                let v = cocycle.violation.expect("triple");
                report.record(
                    "cocycle",
                    Status::Fail,
                    format!("violating triple ({}, {}, {})", v.sigma, v.tau, v.rho),
                );
                return Ok(report);
            }
            report.record("cocycle", Status::Pass, format!("{} triples", cocycle.checked));
            let cp = crossed_product(&fs, "crossed product")?;
            report.record(
                "construction",
                Status::Pass,
                format!(
                    "dim {} over F, center dim {}, {}",
                    cp.algebra().dim(),
                    cp.center_basis().len(),
                    if cp.is_galois_product() {
                        "Galois crossed product"
                    } else {
                        "M(G) over Fix(G) (non-Galois, flagged)"
                    }
                ),
            );
            serde_json::to_value(CrossedArtifact::from_crossed_product(&cp))
                .map_err(|e| Error::Internal(e.to_string()))?
        }
        BuildKind::Cyclic => {
            let (desc, digest): (CyclicDesc, _) = read_json(file)?;
            record_input(&mut report, file, digest);
            let (ext, sigma_idx, spec) = desc.to_spec()?;
            let build = skewlab::skewpoly::generalized_cyclic(&spec, "generalized cyclic")?;
            report.record(
                "construction",
                Status::Pass,
                format!(
                    "dim {}, center dim {}, degree over center {:?}",
                    build.quotient.algebra.dim(),
                    build.report.center_dim,
                    build.report.degree_over_center
                ),
            );
            report.record(
                "centralizer-of-S",
                if build.report.s_centralizer_is_center_of_s {
                    Status::Pass
                } else {
                    Status::Fail
                },
                "Cent(S) in (S,σ,d) equals C(S)".to_string(),
            );
            serde_json::to_value(CyclicArtifact::from_build(&ext, sigma_idx, &spec, &build))
                .map_err(|e| Error::Internal(e.to_string()))?
        }
        BuildKind::AbelianChain => {
            let (desc, digest): (ChainBuildDesc, _) = read_json(file)?;
            record_input(&mut report, file, digest);
            let (params, probe) = desc.to_params()?;
            let chain = build_abelian_chain(&params)?;
            report.record(
                "construction",
                Status::Pass,
                format!(
                    "{} levels, final dim {} = [M:F]²",
                    chain.len(),
                    chain.final_algebra.dim()
                ),
            );
            let center = skewlab::abelianchain::verify_center_is_base(&chain)?;
            report.record(
                "center-is-base",
                if center.pass { Status::Pass } else { Status::Fail },
                format!("C(A_k) has dimension {}", center.center_dim),
            );
            for level in &chain.levels {
                let inner = skewlab::abelianchain::verify_inner_order(level)?;
                report.record(
                    &format!("inner-order-{}", level.index),
                    if inner.pass { Status::Pass } else { Status::Fail },
                    format!("τ_{}|C(A_{}) has order {:?}, q = {}", level.index, level.index, inner.computed_order, inner.q),
                );
            }
            if let Some(search) = probe {
                let probe_report = division_probe(&chain, &search)?;
                let (status, detail) = division_verdict_detail(&probe_report.verdict);
                report.record("division-probe", status, detail);
            }
            serde_json::to_value(ChainArtifact::from_chain(&chain)?)
                .map_err(|e| Error::Internal(e.to_string()))?
        }
    };
    if let Some(out_path) = out {
        let text = serde_json::to_string_pretty(&artifact).map_err(|e| Error::Internal(e.to_string()))?;
        write_atomic(out_path, &text)?;
        report.record("artifact", Status::Pass, format!("written to {}", out_path.display()));
    }
    report.artifact = Some(artifact);
    Ok(report)
}

fn division_verdict_detail(verdict: &DivisionVerdict) -> (Status, String) {
    match verdict {
        DivisionVerdict::Division => (Status::Pass, "division (exhaustive, no witness at any level)".into()),
        DivisionVerdict::NotDivision { level } => (
            Status::Pass,
            format!("not-division (witness at level {level})"),
        ),
        DivisionVerdict::Undetermined { bound } => (
            Status::Undetermined,
            format!("undetermined({bound}): no witness up to height {bound}"),
        ),
    }
}

#[derive(Serialize)]
struct DecomposeLevelReport {
    index: usize,
    q: u64,
    dim: usize,
    center_dim: usize,
    c: Vec<String>,
    tau: Vec<Vec<String>>,
    iso_digest: String,
}

#[derive(Serialize)]
struct DecomposeArtifact {
    kind: String,
    galois: bool,
    center_dims: Vec<usize>,
    series: Vec<Vec<usize>>,
    levels: Vec<DecomposeLevelReport>,
}

fn cmd_decompose(file: &Path, series_flag: &str, out: Option<&Path>) -> Result<RunReport> {
    let mut report = RunReport::new("decompose");
    let (artifact, digest): (CrossedArtifact, _) = read_json(file)?;
    record_input(&mut report, file, digest);
    if artifact.kind != "crossed" {
        return Err(Error::InvalidInput(format!(
            "decompose needs a crossed-product artifact, got kind {:?}",
            artifact.kind
        )));
    }
    // solvability of the declared group comes first; a non-solvable group is
    // a definite (exit 1) verdict, not a malformed input
    let group = artifact.group.to_group()?;
    let series: SolvableSeries = if series_flag == "auto" {
        match group.composition_series() {
            Ok(s) => s,
            Err(e) => {
                report.record("is_solvable", Status::Fail, e.to_string());
                return Ok(report);
            }
        }
    } else {
        let (subs, sdigest): (Vec<Vec<usize>>, _) = read_json(Path::new(series_flag))?;
        record_input(&mut report, Path::new(series_flag), sdigest);
        let sets: Vec<BTreeSet<usize>> = subs.iter().map(|v| v.iter().copied().collect()).collect();
        SolvableSeries::from_subgroups(&group, sets)?
    };
    report.record(
        "series",
        Status::Pass,
        format!(
            "quotient orders {:?}, generators {:?}",
            series.primes,
            series.generators.iter().map(|&g| group.label(g)).collect::<Vec<_>>()
        ),
    );
    let cp = artifact.rebuild()?;
    let chain = decompose_chain(&cp, &series)?;
    report.record(
        "chain",
        Status::Pass,
        format!("{} levels, center tower dims {:?}", chain.levels.len(), chain.center_dims),
    );
    for level in &chain.levels {
        level
            .iso
            .verify(&level.quotient.algebra, &level.next_algebra)?;
        report.record(
            &format!("iso-certificate-{}", level.index),
            Status::Pass,
            format!("digest {}", &level.iso.digest[..16]),
        );
    }
    let checks = centralizer_identity_check(&chain)?;
    for c in &checks {
        report.record(
            &format!("centralizer-identity-{}", c.level),
            if c.pass { Status::Pass } else { Status::Fail },
            format!("Cent dim {} vs dim A_{} = {}", c.centralizer_dim, c.level, c.expected_dim),
        );
    }
    let (x, qreport) = q_central_element(&cp, &chain)?;
    report.record(
        "q-central",
        Status::Pass,
        format!(
            "x_σ_k = {}; is {}-central: {}; least central power: {:?}",
            scalar_vec(&x.coords),
            qreport.q,
            qreport.is_q_central,
            qreport.least_central_power
        ),
    );
    let dec = DecomposeArtifact {
        kind: "chain-report".into(),
        galois: chain.galois,
        center_dims: chain.center_dims.clone(),
        series: chain
            .series
            .subgroups
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect(),
        levels: chain
            .levels
            .iter()
            .map(|l| DecomposeLevelReport {
                index: l.index,
                q: l.q,
                dim: l.algebra.dim(),
                center_dim: l.center_basis.len(),
                c: render_scalars(&l.c.coords),
                tau: (0..l.tau.matrix().rows())
                    .map(|i| render_scalars(l.tau.matrix().row(i)))
                    .collect(),
                iso_digest: l.iso.digest.clone(),
            })
            .collect(),
    };
    let value = serde_json::to_value(&dec).map_err(|e| Error::Internal(e.to_string()))?;
    if let Some(out_path) = out {
        let text = serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))?;
        write_atomic(out_path, &text)?;
    }
    report.artifact = Some(value);
    Ok(report)
}

fn cmd_probe_division(file: &Path, height: Option<u32>, exhaustive: bool) -> Result<RunReport> {
    let mut report = RunReport::new("probe-division");
    let search = if exhaustive {
        SearchSpec::Exhaustive
    } else {
        SearchSpec::Height(height.ok_or_else(|| {
            Error::InvalidInput("probe-division needs --height N or --exhaustive".into())
        })?)
    };
    let (value, digest): (serde_json::Value, _) = read_json(file)?;
    record_input(&mut report, file, digest);
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::InvalidInput("artifact has no kind".into()))?;
    match kind {
        "abelian-chain" => {
            let artifact: ChainArtifact =
                serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
            let chain = artifact.rebuild()?;
            let probe = division_probe(&chain, &search)?;
            for (level, outcome) in probe.outcomes.iter().enumerate() {
                let (_, detail) = witness_detail(outcome);
                report.record(&format!("level-{level}"), Status::Pass, detail);
            }
            let (status, detail) = division_verdict_detail(&probe.verdict);
            report.record("verdict", status, detail);
        }
        "cyclic" => {
            let artifact: CyclicArtifact =
                serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
            let (ext, sigma_idx, spec) = artifact.rebuild()?;
            let outcome = norm_condition_witness(
                ext.carrier(),
                &ext.automorphism(sigma_idx).map,
                spec.m as u64,
                &spec.d,
                &search,
            )?;
            let (_, detail) = witness_detail(&outcome);
            report.record("level-0", Status::Pass, detail);
            let verdict = match &outcome {
                WitnessOutcome::Witness { .. } => DivisionVerdict::NotDivision { level: 0 },
                WitnessOutcome::NoneExhaustive => DivisionVerdict::Division,
                WitnessOutcome::NoneFound { bound } => DivisionVerdict::Undetermined { bound: *bound },
            };
            let (status, detail) = division_verdict_detail(&verdict);
            report.record("verdict", status, detail);
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "probe-division needs a chain artifact, got kind {other:?}"
            )))
        }
    }
    Ok(report)
}

fn load_algebra(file: &Path) -> Result<(AlgebraDesc, String)> {
    let (value, digest): (serde_json::Value, _) = read_json(file)?;
    let desc: AlgebraDesc = if value.get("structconsts").is_some() {
        serde_json::from_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?
    } else if let Some(inner) = value.get("algebra") {
        serde_json::from_value(inner.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?
    } else {
        return Err(Error::InvalidInput(
            "file is neither an algebra descriptor nor an artifact with an \"algebra\" field".into(),
        ));
    };
    Ok((desc, digest))
}

fn cmd_center(file: &Path) -> Result<RunReport> {
    let mut report = RunReport::new("center");
    let (desc, digest) = load_algebra(file)?;
    record_input(&mut report, file, digest);
    let algebra = desc.to_algebra()?;
    let center = algebra.center()?;
    report.record(
        "center",
        Status::Pass,
        format!(
            "dimension {}; basis {}",
            center.len(),
            center
                .iter()
                .map(|z| scalar_vec(&z.coords))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );
    report.artifact = Some(serde_json::json!({
        "kind": "center",
        "dim": center.len(),
        "basis": center.iter().map(|z| render_scalars(&z.coords)).collect::<Vec<_>>(),
    }));
    Ok(report)
}

fn cmd_centralizer(file: &Path, gens_file: &Path) -> Result<RunReport> {
    let mut report = RunReport::new("centralizer");
    let (desc, digest) = load_algebra(file)?;
    record_input(&mut report, file, digest);
    let (gens_raw, gdigest): (Vec<Vec<String>>, _) = read_json(gens_file)?;
    record_input(&mut report, gens_file, gdigest);
    let algebra = desc.to_algebra()?;
    let gens: Vec<skewlab::AlgElement> = gens_raw
        .iter()
        .map(|coords| algebra.element(parse_scalars(algebra.domain(), coords)?))
        .collect::<Result<_>>()?;
    let basis = algebra.centralizer(&gens)?;
    report.record(
        "centralizer",
        Status::Pass,
        format!("dimension {}", basis.len()),
    );
    report.artifact = Some(serde_json::json!({
        "kind": "centralizer",
        "dim": basis.len(),
        "basis": basis.iter().map(|z| render_scalars(&z.coords)).collect::<Vec<_>>(),
    }));
    Ok(report)
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Unsupported(_) | Error::DomainMismatch(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut allow_undetermined = false;
    let result = match &cli.cmd {
        Cmd::ValidateCocycle { file } => cmd_validate_cocycle(file),
        Cmd::Build { file, kind, out } => cmd_build(file, *kind, out.as_deref()),
        Cmd::Decompose { file, series, out } => cmd_decompose(file, series, out.as_deref()),
        Cmd::ProbeDivision {
            file,
            height,
            exhaustive,
            allow_undetermined: allow,
        } => {
            allow_undetermined = *allow;
            cmd_probe_division(file, *height, *exhaustive)
        }
        Cmd::Center { file } => cmd_center(file),
        Cmd::Centralizer { file, gens } => cmd_centralizer(file, gens),
    };
    match result {
        Ok(mut report) => {
            report.timing_ms = start.elapsed().as_millis() as u64;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprint!("{}", report.human());
            ExitCode::from(report.exit_code(allow_undetermined) as u8)
        }
        Err(e) => {
            let code = classify(&e);
            let err = serde_json::json!({"error": e.to_string(), "exit": code});
            println!("{}", serde_json::to_string_pretty(&err).expect("error serializes"));
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
