use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sno_core::{
    nilpotent_rank_cert, robust_spectral_cert, sno_compare, sno_representation, spectral_cert, stability_compare,
    Branch, CertificateMode, CertificateResult, Complex64, DenseMatrix, NilpotentCertificate, Relation,
    SnoRepresentation, SnoVerdict, StabilityReport, TimeGrid, Tolerances,
};

use crate::args::{CertKind, Cli, Command, CommonArgs, Output, RobustMode};
use crate::matrix_file::read_matrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Rendered report and the exit code it maps to.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

/// Runs one command; errors map to exit code 2 with the message on stderr.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.exit
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn dispatch(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Compare { a, b, common } => cmd_compare(&a, &b, &common),
        Command::Certify {
            a,
            b,
            kind,
            gamma,
            gamma_scan,
            eps_a,
            eps_b,
            robust_mode,
            common,
        } => {
            let opts = CertifyOptions {
                kind,
                gamma,
                gamma_scan: gamma_scan.as_deref().map(parse_gamma_scan).transpose()?,
                eps_a,
                eps_b,
                robust_mode,
            };
            cmd_certify(&a, &b, &opts, &common)
        }
        Command::Stability {
            a,
            b,
            t_end,
            samples,
            envelope_csv,
            common,
        } => cmd_stability(&a, &b, t_end, samples, envelope_csv.as_deref(), &common),
    }
}

fn tolerances(common: &CommonArgs) -> Result<Tolerances> {
    let tol = Tolerances {
        lex_tol: common.lex_tol,
        cluster_tol: common.cluster_tol,
        rank_tol: common.rank_tol,
    };
    tol.validate()?;
    Ok(tol)
}

fn load_pair(a: &Path, b: &Path) -> Result<(DenseMatrix, DenseMatrix)> {
    let ma = read_matrix(a).with_context(|| a.display().to_string())?;
    let mb = read_matrix(b).with_context(|| b.display().to_string())?;
    if ma.parsed.dim() != mb.parsed.dim() {
        bail!(
            "dimension mismatch: {} is {n}×{n}, {} is {m}×{m}",
            a.display(),
            b.display(),
            n = ma.parsed.dim(),
            m = mb.parsed.dim()
        );
    }
    Ok((ma.parsed, mb.parsed))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Compact decimal rendering for human output.
fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if !(1e-4..1e6).contains(&a) {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn cnum(z: Complex64) -> String {
    let im = num(z.im.abs());
    if z.im.is_sign_negative() && z.im != 0.0 {
        format!("{}-{}i", num(z.re), im)
    } else {
        format!("{}+{}i", num(z.re), im)
    }
}

fn render_representation(out: &mut String, label: &str, rep: &SnoRepresentation) {
    writeln!(out, "{label}: n = {}", rep.dim()).unwrap();
    for (k, (ev, part)) in rep.spectrum.distinct.iter().zip(&rep.partitions).enumerate() {
        writeln!(
            out,
            "  λ{} = {}  algebraic {}  geometric {}  Jordan blocks {}",
            k + 1,
            cnum(ev.value),
            ev.alg_mult,
            part.len(),
            part
        )
        .unwrap();
    }
}

fn prefix_sum(rep: &SnoRepresentation, k: usize) -> Complex64 {
    rep.spectrum.eigenvalue_vector().iter().take(k).sum()
}

/// One-line explanation such as
/// `A ≺_SN B via nilpotent branch, k=1, (2,2) ⊴ (3,1)`.
fn describe_verdict(v: &SnoVerdict, ra: &SnoRepresentation, rb: &SnoRepresentation, names: (&str, &str)) -> String {
    let (x, y) = names;
    if v.relation == Relation::Equal {
        return format!("{x} = {y} (equal spectra and Jordan structure)");
    }
    let head = format!("{x} {}_SN {y} via {} branch", v.relation.symbol(), v.branch);
    let Some(k) = v.witness else { return head };
    match v.branch {
        Branch::Spectral => format!(
            "{head}, k={k}, prefix sums {} vs {}",
            cnum(prefix_sum(ra, k)),
            cnum(prefix_sum(rb, k))
        ),
        Branch::Nilpotent => {
            let empty = sno_core::Partition::empty();
            let p = ra.partitions.get(k - 1).unwrap_or(&empty);
            let q = rb.partitions.get(k - 1).unwrap_or(&empty);
            let rel = sno_core::dominance_compare(p, q).relation;
            let sym = if rel.holds_le() {
                "⊴"
            } else if rel.holds_ge() {
                "⊵"
            } else {
                "∥"
            };
            format!("{head}, k={k}, {p} {sym} {q}")
        }
    }
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    relation: Relation,
    symbol: &'static str,
    branch: Branch,
    witness: Option<usize>,
    summary: &'a str,
    /// Prefix sums of both eigenvalue vectors at the witness (spectral branch).
    prefix_sums: Option<[Complex64; 2]>,
}

#[derive(Serialize)]
struct ToleranceJson {
    lex_tol: f64,
    rank_tol: f64,
    cluster_tol_a: f64,
    cluster_tol_b: f64,
}

#[derive(Serialize)]
struct CompareJson<'a> {
    command: &'static str,
    a: &'a Path,
    b: &'a Path,
    n: usize,
    tolerances: ToleranceJson,
    representation_a: &'a SnoRepresentation,
    representation_b: &'a SnoRepresentation,
    verdict: VerdictJson<'a>,
}

fn tolerance_json(tol: &Tolerances, a: &DenseMatrix, b: &DenseMatrix) -> ToleranceJson {
    ToleranceJson {
        lex_tol: tol.lex_tol,
        rank_tol: tol.rank_tol,
        cluster_tol_a: tol.cluster_tol_for(a),
        cluster_tol_b: tol.cluster_tol_for(b),
    }
}

pub fn cmd_compare(a_path: &Path, b_path: &Path, common: &CommonArgs) -> Result<Outcome> {
    let tol = tolerances(common)?;
    let (a, b) = load_pair(a_path, b_path)?;
    let ra = sno_representation(&a, &tol).context("representation of A")?;
    let rb = sno_representation(&b, &tol).context("representation of B")?;
    let v = sno_compare(&ra, &rb, tol.lex_tol)?;
    let summary = describe_verdict(&v, &ra, &rb, ("A", "B"));

    let text = match common.output {
        Output::Json => to_json(&CompareJson {
            command: "compare",
            a: a_path,
            b: b_path,
            n: a.dim(),
            tolerances: tolerance_json(&tol, &a, &b),
            representation_a: &ra,
            representation_b: &rb,
            verdict: VerdictJson {
                relation: v.relation,
                symbol: v.relation.symbol(),
                branch: v.branch,
                witness: v.witness,
                summary: &summary,
                prefix_sums: match (v.branch, v.witness) {
                    (Branch::Spectral, Some(k)) => Some([prefix_sum(&ra, k), prefix_sum(&rb, k)]),
                    _ => None,
                },
            },
        }),
        Output::Human => {
            let mut out = String::new();
            render_representation(&mut out, &format!("A ({})", a_path.display()), &ra);
            render_representation(&mut out, &format!("B ({})", b_path.display()), &rb);
            writeln!(out, "{summary}").unwrap();
            out
        }
    };
    Ok(Outcome { text, exit: EXIT_OK })
}

pub struct CertifyOptions {
    pub kind: CertKind,
    pub gamma: f64,
    pub gamma_scan: Option<Vec<f64>>,
    pub eps_a: f64,
    pub eps_b: f64,
    pub robust_mode: RobustMode,
}

/// Parses `lo:hi:steps` into `steps` evenly spaced values from `lo` to `hi`.
pub fn parse_gamma_scan(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        bail!("--gamma-scan expects lo:hi:steps, got `{spec}`");
    };
    let lo: f64 = lo.trim().parse().with_context(|| format!("bad scan start `{lo}`"))?;
    let hi: f64 = hi.trim().parse().with_context(|| format!("bad scan end `{hi}`"))?;
    let steps: usize = steps.trim().parse().with_context(|| format!("bad scan step count `{steps}`"))?;
    if steps == 0 {
        bail!("--gamma-scan needs at least one step");
    }
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        bail!("--gamma-scan range must satisfy 0 ≤ lo ≤ hi ≤ 1");
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
        .collect())
}

fn gershgorin_once(a: &DenseMatrix, b: &DenseMatrix, gamma: f64, opts: &CertifyOptions) -> Result<CertificateResult> {
    Ok(match opts.kind {
        CertKind::GershgorinRobust => {
            let mode = match opts.robust_mode {
                RobustMode::Nominal => CertificateMode::RobustNominal,
                RobustMode::Given => CertificateMode::RobustGiven,
            };
            robust_spectral_cert(a, b, gamma, opts.eps_a, opts.eps_b, mode)?
        }
        _ => spectral_cert(a, b, gamma)?,
    })
}

fn render_gershgorin(out: &mut String, r: &CertificateResult) {
    let mode = match r.mode {
        CertificateMode::Exact => "exact".to_string(),
        CertificateMode::RobustNominal => format!("robust, nominal matrices, ε_A = {}, ε_B = {}", num(r.eps_a), num(r.eps_b)),
        CertificateMode::RobustGiven => format!("robust, given matrices, ε_A = {}, ε_B = {}", num(r.eps_a), num(r.eps_b)),
    };
    writeln!(out, "Gershgorin certificate, γ = {} ({mode})", num(r.gamma)).unwrap();
    let shift = |eps: f64| if r.mode == CertificateMode::RobustNominal { eps } else { 0.0 };
    for ch in &r.checks {
        let (l, rd) = (&ch.left_disk, &ch.right_disk);
        let (sa, sb) = (shift(r.eps_a), shift(r.eps_b));
        let grow_a = if sa > 0.0 { format!(" + {}", num(sa)) } else { String::new() };
        let grow_b = if sb > 0.0 { format!(" + {}", num(sb)) } else { String::new() };
        writeln!(
            out,
            "  k={}: A row {} centre {} radius {}{grow_a} → ({}, {})  {}  B row {} centre {} radius {}{grow_b} → ({}, {})  {}",
            ch.k,
            l.source_index + 1,
            cnum(l.center),
            num(l.radius),
            num(ch.upper_left.re),
            num(ch.upper_left.im),
            if ch.pass { "≤lex" } else { ">lex" },
            rd.source_index + 1,
            cnum(rd.center),
            num(rd.radius),
            num(ch.lower_right.re),
            num(ch.lower_right.im),
            if ch.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(out, "status: {}", r.status).unwrap();
}

#[derive(Serialize)]
struct ScanEntry {
    gamma: f64,
    status: sno_core::CertificateStatus,
}

#[derive(Serialize)]
struct GershgorinJson<'a> {
    command: &'static str,
    kind: &'static str,
    a: &'a Path,
    b: &'a Path,
    scan: Option<Vec<ScanEntry>>,
    certifying_gamma: Option<f64>,
    result: &'a CertificateResult,
}

#[derive(Serialize)]
struct NilpotentJson<'a> {
    command: &'static str,
    kind: &'static str,
    a: &'a Path,
    b: &'a Path,
    tolerances: ToleranceJson,
    result: &'a NilpotentCertificate,
}

fn seq(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", items.join(", "))
}

pub fn cmd_certify(a_path: &Path, b_path: &Path, opts: &CertifyOptions, common: &CommonArgs) -> Result<Outcome> {
    let tol = tolerances(common)?;
    let (a, b) = load_pair(a_path, b_path)?;

    if opts.kind == CertKind::NilpotentRank {
        if opts.gamma_scan.is_some() {
            bail!("--gamma-scan applies to the gershgorin kinds only");
        }
        let cert = nilpotent_rank_cert(&a, &b, &tol)?;
        let exit = if cert.status.is_certified() { EXIT_OK } else { EXIT_NOT_CERTIFIED };
        let text = match common.output {
            Output::Json => to_json(&NilpotentJson {
                command: "certify",
                kind: "nilpotent-rank",
                a: a_path,
                b: b_path,
                tolerances: tolerance_json(&tol, &a, &b),
                result: &cert,
            }),
            Output::Human => {
                let mut out = String::new();
                writeln!(out, "Rank-power certificate (ranks of (M - λI)^ℓ, ℓ = 1, 2, …)").unwrap();
                for (k, row) in cert.rows.iter().enumerate() {
                    writeln!(
                        out,
                        "  λ{} = {} (algebraic {}): A {}  B {}  {}",
                        k + 1,
                        cnum(row.eigenvalue),
                        row.alg_mult,
                        seq(&row.ranks_a),
                        seq(&row.ranks_b),
                        row.relation.symbol()
                    )
                    .unwrap();
                }
                writeln!(out, "spectral distance {}", num(cert.spectral_distance)).unwrap();
                match cert.witness {
                    Some(k) => writeln!(out, "status: {}, decided at λ{k}", cert.status).unwrap(),
                    None => writeln!(out, "status: {}, identical rank sequences", cert.status).unwrap(),
                }
                out
            }
        };
        return Ok(Outcome { text, exit });
    }

    let kind = if opts.kind == CertKind::GershgorinRobust { "gershgorin-robust" } else { "gershgorin" };
    let (result, scan, certifying) = match &opts.gamma_scan {
        None => (gershgorin_once(&a, &b, opts.gamma, opts)?, None, None),
        Some(gammas) => {
            let mut entries = Vec::new();
            let mut first: Option<CertificateResult> = None;
            let mut last = None;
            for &g in gammas {
                let r = gershgorin_once(&a, &b, g, opts)?;
                entries.push(ScanEntry { gamma: g, status: r.status });
                if first.is_none() && r.status.is_certified() {
                    first = Some(r.clone());
                }
                last = Some(r);
            }
            let certifying = first.as_ref().map(|r| r.gamma);
            let shown = first.or(last).expect("scan has at least one γ");
            (shown, Some(entries), certifying)
        }
    };
    let exit = if result.status.is_certified() { EXIT_OK } else { EXIT_NOT_CERTIFIED };
    let text = match common.output {
        Output::Json => to_json(&GershgorinJson {
            command: "certify",
            kind,
            a: a_path,
            b: b_path,
            scan,
            certifying_gamma: certifying,
            result: &result,
        }),
        Output::Human => {
            let mut out = String::new();
            if let Some(entries) = &scan {
                writeln!(out, "γ scan:").unwrap();
                for e in entries {
                    writeln!(out, "  γ = {}: {}", num(e.gamma), e.status).unwrap();
                }
                match certifying {
                    Some(g) => writeln!(out, "certifying γ = {}", num(g)).unwrap(),
                    None => writeln!(out, "no γ in the scan certifies; showing the last one").unwrap(),
                }
            }
            render_gershgorin(&mut out, &result);
            out
        }
    };
    Ok(Outcome { text, exit })
}

/// `dir/env.csv` → `dir/env_a1.csv`.
pub fn envelope_path(base: &Path, tag: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("envelope");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{tag}.{ext}"),
        None => format!("{stem}_{tag}"),
    };
    base.with_file_name(name)
}

#[derive(Serialize)]
struct StabilityJson<'a> {
    command: &'static str,
    a: &'a Path,
    b: &'a Path,
    verdict_summary: &'a str,
    envelope_files: Option<[PathBuf; 2]>,
    report: &'a StabilityReport,
}

pub fn cmd_stability(
    a_path: &Path,
    b_path: &Path,
    t_end: Option<f64>,
    samples: usize,
    envelope_csv: Option<&Path>,
    common: &CommonArgs,
) -> Result<Outcome> {
    let tol = tolerances(common)?;
    let (a, b) = load_pair(a_path, b_path)?;
    let grid = match t_end {
        Some(t) => Some(TimeGrid::linear(t, samples)?),
        None => {
            // validate the sample count before the default horizon is known
            TimeGrid::linear(1.0, samples)?;
            None
        }
    };
    let grid = match grid {
        Some(g) => Some(g),
        None => {
            let alphas = [sno_core::spectral_abscissa(&a)?, sno_core::spectral_abscissa(&b)?];
            Some(TimeGrid::default_for(&alphas, samples)?)
        }
    };
    let report = stability_compare(&a, &b, grid, &tol)?;
    let summary = describe_verdict(&report.sno_verdict, &report.representation_1, &report.representation_2, ("A1", "A2"));

    let files = match envelope_csv {
        Some(base) => {
            let p1 = envelope_path(base, "a1");
            let p2 = envelope_path(base, "a2");
            fs::write(&p1, report.envelope_1.to_csv()).with_context(|| format!("writing {}", p1.display()))?;
            fs::write(&p2, report.envelope_2.to_csv()).with_context(|| format!("writing {}", p2.display()))?;
            Some([p1, p2])
        }
        None => None,
    };

    let text = match common.output {
        Output::Json => to_json(&StabilityJson {
            command: "stability",
            a: a_path,
            b: b_path,
            verdict_summary: &summary,
            envelope_files: files,
            report: &report,
        }),
        Output::Human => {
            let mut out = String::new();
            let class = |s: bool| if s { "stable" } else { "not stable" };
            writeln!(out, "A1 ({}): spectral abscissa {} ({})", a_path.display(), num(report.abscissa_1), class(report.in_class_1)).unwrap();
            writeln!(out, "A2 ({}): spectral abscissa {} ({})", b_path.display(), num(report.abscissa_2), class(report.in_class_2)).unwrap();
            render_representation(&mut out, "A1", &report.representation_1);
            render_representation(&mut out, "A2", &report.representation_2);
            writeln!(out, "order: {summary}").unwrap();
            writeln!(out, "stability: {}", report.stab_verdict).unwrap();
            writeln!(
                out,
                "grid: {} samples on [{}, {}]",
                report.grid.samples,
                num(report.grid.t_start),
                num(report.grid.t_end)
            )
            .unwrap();
            let (lo, hi) = match report.stab_verdict {
                sno_core::StabilityVerdict::A2StrictlyMoreStable => ("Γ2", "Γ1"),
                _ => ("Γ1", "Γ2"),
            };
            match report.crossing_time {
                Some(t) => writeln!(out, "crossing time T ≈ {} ({lo} < {hi} at every grid point after T)", num(t)).unwrap(),
                None => writeln!(out, "crossing time: none on this grid").unwrap(),
            }
            writeln!(
                out,
                "peak ‖e^(tA1)‖ = {} at t = {}; peak ‖e^(tA2)‖ = {} at t = {}",
                num(report.peak_1.value),
                num(report.peak_1.t),
                num(report.peak_2.value),
                num(report.peak_2.t)
            )
            .unwrap();
            if let Some([p1, p2]) = &files {
                writeln!(out, "envelopes written to {} and {}", p1.display(), p2.display()).unwrap();
            }
            out
        }
    };
    Ok(Outcome { text, exit: EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_scan_parsing() {
        assert_eq!(parse_gamma_scan("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_gamma_scan("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_gamma_scan("0:1").is_err());
        assert!(parse_gamma_scan("0:2:3").is_err());
        assert!(parse_gamma_scan("0:1:0").is_err());
        assert!(parse_gamma_scan("a:1:3").is_err());
    }

    #[test]
    fn envelope_paths() {
        assert_eq!(envelope_path(Path::new("out/env.csv"), "a1"), PathBuf::from("out/env_a1.csv"));
        assert_eq!(envelope_path(Path::new("env"), "a2"), PathBuf::from("env_a2"));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(num(-1.0), "-1");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(1e-9), "1.000000e-9");
        assert_eq!(cnum(Complex64::new(1.5, -2.0)), "1.5-2i");
        assert_eq!(cnum(Complex64::new(0.0, -0.0)), "0+0i");
    }
}
