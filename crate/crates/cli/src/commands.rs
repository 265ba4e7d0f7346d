//! Subcommand implementations: each builds its inputs, runs the matching
//! library operation, prints a short summary, and writes any requested
//! output files.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sriplab_core::dictionary::{coherence, coherence_pair_count};
use sriplab_core::{
    error_spectrum, estimate_decay, omp, resolution_apply, rip_exact_check, sample_support,
    save_dictionary, srip_scan, AtomId, CoefficientVector, Dictionary, Prime, ScanConfig,
    ScanReport, SizeRule, SpectrumResult,
};

use crate::report::{self, num, Provenance};
use crate::svg::{render_histogram, HistogramSpec};
use crate::{
    CoherenceCmd, DecayCmd, DictCmd, Family, Format, RecoverCmd, RipExactCmd, SpectrumCmd, SripCmd,
};

/// Decorrelates the coefficient stream from the support stream in synthetic
/// recovery signals.
const COEFF_SEED_XOR: u64 = 0xC0FF_EE00;

pub fn dict(args: &DictCmd) -> Result<()> {
    let d = args.dict.build()?;
    println!("p = {}", d.p());
    println!("bases = {}", d.num_bases());
    println!("atoms = {}", d.num_atoms());
    let pairs = coherence_pair_count(&d);
    if pairs <= u128::from(args.max_pairs) {
        println!("coherence mu = {:.4} ({pairs} pairs scanned)", coherence(&d));
    } else {
        println!(
            "coherence: skipped ({pairs} pairs exceeds cap {}; re-run `coherence --max-pairs` \
             to force)",
            args.max_pairs
        );
    }
    if let Some(path) = &args.out {
        save_dictionary(&d, path).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn coherence_scan(args: &CoherenceCmd) -> Result<()> {
    let d = args.dict.build()?;
    let pairs = coherence_pair_count(&d);
    if pairs > u128::from(args.max_pairs) {
        bail!(
            "invalid configuration (max_pairs): {pairs} atom pairs exceed the cap {}; raise \
             --max-pairs to force the scan",
            args.max_pairs
        );
    }
    let mu = coherence(&d);
    println!(
        "p = {} bases = {} atoms = {}",
        d.p(),
        d.num_bases(),
        d.num_atoms()
    );
    println!("coherence mu = {} ({pairs} pairs scanned)", num(mu));

    if let Some(path) = &args.out {
        let prov = Provenance::new(format!("coherence {}", args.dict.describe()), None);
        match args.format {
            Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "{}", prov.comment_line());
                let _ = writeln!(out, "p,bases,atoms,pairs,mu");
                let _ = writeln!(
                    out,
                    "{},{},{},{pairs},{}",
                    d.p(),
                    d.num_bases(),
                    d.num_atoms(),
                    num(mu)
                );
                report::write_text(path, &out)?;
            }
            Format::Json => {
                #[derive(Serialize)]
                struct CoherenceDoc {
                    schema: &'static str,
                    provenance: Provenance,
                    p: u64,
                    bases: usize,
                    atoms: usize,
                    pairs: u64,
                    mu: f64,
                }
                report::write_json(
                    path,
                    &CoherenceDoc {
                        schema: "sriplab-coherence-v1",
                        provenance: prov,
                        p: d.p().get(),
                        bases: d.num_bases(),
                        atoms: d.num_atoms(),
                        pairs: pairs as u64,
                        mu,
                    },
                )?;
            }
        }
    }
    Ok(())
}

fn size_rule(epsilon: Option<f64>, alpha: Option<f64>) -> Result<SizeRule> {
    match (epsilon, alpha) {
        (Some(e), None) => Ok(SizeRule::Epsilon(e)),
        (None, Some(a)) => Ok(SizeRule::Alpha(a)),
        _ => bail!("invalid configuration (size): exactly one of --epsilon, --alpha is required"),
    }
}

fn size_flag_text(epsilon: Option<f64>, alpha: Option<f64>) -> String {
    match (epsilon, alpha) {
        (Some(e), _) => format!("--epsilon {e}"),
        (_, Some(a)) => format!("--alpha {a}"),
        _ => String::new(),
    }
}

#[derive(Serialize)]
struct SripTrialRow {
    trial_index: u64,
    seed: u64,
    n: usize,
    deviation: f64,
}

#[derive(Serialize)]
struct SripSummary {
    p: u64,
    n: usize,
    threshold: f64,
    trials: u64,
    exceed_count: u64,
    p_hat: f64,
    wilson_lo: f64,
    wilson_hi: f64,
}

#[derive(Serialize)]
struct SripDoc {
    schema: &'static str,
    provenance: Provenance,
    summary: SripSummary,
    trials: Vec<SripTrialRow>,
}

fn srip_summary(r: &ScanReport) -> SripSummary {
    SripSummary {
        p: r.p,
        n: r.n,
        threshold: r.threshold,
        trials: r.trials,
        exceed_count: r.exceed_count,
        p_hat: r.p_hat,
        wilson_lo: r.wilson_ci.0,
        wilson_hi: r.wilson_ci.1,
    }
}

fn srip_csv(r: &ScanReport, prov: &Provenance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", prov.comment_line());
    let _ = writeln!(
        out,
        "record,trial_index,seed,n,deviation,p,threshold,p_hat,wilson_lo,wilson_hi"
    );
    for (i, (dev, seed)) in r.deviations.iter().zip(r.seeds.iter()).enumerate() {
        let _ = writeln!(out, "trial,{i},{seed},{},{},,,,,", r.n, num(*dev));
    }
    let _ = writeln!(
        out,
        "summary,,,{},,{},{},{},{},{}",
        r.n,
        r.p,
        num(r.threshold),
        num(r.p_hat),
        num(r.wilson_ci.0),
        num(r.wilson_ci.1)
    );
    out
}

pub fn srip(args: &SripCmd) -> Result<()> {
    let d = args.dict.build()?;
    let cfg = ScanConfig {
        size: size_rule(args.epsilon, args.alpha)?,
        trials: args.trials,
        master_seed: args.master_seed,
        policy: args.policy.into(),
        threshold_override: args.threshold,
    };
    let r = srip_scan(&d, &cfg)?;
    println!(
        "p = {} n = {} threshold = {} trials = {}",
        r.p,
        r.n,
        num(r.threshold),
        r.trials
    );
    println!(
        "p_hat = {} exceed = {} wilson = [{}, {}]",
        num(r.p_hat),
        r.exceed_count,
        num(r.wilson_ci.0),
        num(r.wilson_ci.1)
    );

    if let Some(path) = &args.out {
        let mut command = format!(
            "srip {} {}",
            args.dict.describe(),
            size_flag_text(args.epsilon, args.alpha)
        );
        if let Some(t) = args.threshold {
            let _ = write!(command, " --threshold {t}");
        }
        let _ = write!(
            command,
            " --trials {} --master-seed {} --policy {}",
            args.trials,
            args.master_seed,
            args.policy.name()
        );
        let prov = Provenance::new(command, Some(args.master_seed));
        match args.format {
            Format::Csv => report::write_text(path, &srip_csv(&r, &prov))?,
            Format::Json => report::write_json(
                path,
                &SripDoc {
                    schema: "sriplab-srip-v1",
                    provenance: prov,
                    summary: srip_summary(&r),
                    trials: r
                        .deviations
                        .iter()
                        .zip(r.seeds.iter())
                        .enumerate()
                        .map(|(i, (dev, seed))| SripTrialRow {
                            trial_index: i as u64,
                            seed: *seed,
                            n: r.n,
                            deviation: *dev,
                        })
                        .collect(),
                },
            )?,
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumSummary {
    p: u64,
    n: usize,
    trials: u64,
    ks: f64,
    moments: [f64; 6],
}

#[derive(Serialize)]
struct SpectrumDoc {
    schema: &'static str,
    provenance: Provenance,
    summary: SpectrumSummary,
    eigenvalues: Vec<f64>,
}

fn spectrum_csv(r: &SpectrumResult, prov: &Provenance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", prov.comment_line());
    let _ = writeln!(
        out,
        "record,index,eigenvalue,p,n,trials,ks,m1,m2,m3,m4,m5,m6"
    );
    for (i, lambda) in r.pooled.iter().enumerate() {
        let _ = writeln!(out, "eig,{i},{},,,,,,,,,,", num(*lambda));
    }
    let mut summary = format!(
        "summary,,,{},{},{},{}",
        r.p,
        r.n,
        r.trials,
        num(r.ks)
    );
    for m in r.moments {
        let _ = write!(summary, ",{}", num(m));
    }
    let _ = writeln!(out, "{summary}");
    out
}

pub fn spectrum(args: &SpectrumCmd) -> Result<()> {
    let d = args.dict.build()?;
    let n = match (args.size, args.epsilon, args.alpha) {
        (Some(n), None, None) => n,
        (None, Some(e), None) => SizeRule::Epsilon(e).support_size(d.p(), d.num_atoms())?,
        (None, None, Some(a)) => SizeRule::Alpha(a).support_size(d.p(), d.num_atoms())?,
        _ => bail!(
            "invalid configuration (size): exactly one of --size, --epsilon, --alpha is required"
        ),
    };
    if args.bins == 0 {
        bail!("invalid configuration (bins): must be positive");
    }
    let (lo, hi) = (args.range[0], args.range[1]);
    if !(lo < hi) {
        bail!("invalid configuration (range): LO must be below HI, got {lo} {hi}");
    }

    let r = error_spectrum(&d, n, args.trials, args.master_seed, args.policy.into())?;
    println!(
        "p = {} n = {} trials = {} pooled = {}",
        r.p,
        r.n,
        r.trials,
        r.pooled.len()
    );
    println!(
        "ks = {} m2 = {} m4 = {}",
        num(r.ks),
        num(r.moments[1]),
        num(r.moments[3])
    );

    let size_text = match (args.size, args.epsilon, args.alpha) {
        (Some(n), _, _) => format!("--size {n}"),
        (None, e, a) => size_flag_text(e, a),
    };
    let command = format!(
        "spectrum {} {} --trials {} --master-seed {} --policy {} --bins {} --range {} {}",
        args.dict.describe(),
        size_text,
        args.trials,
        args.master_seed,
        args.policy.name(),
        args.bins,
        lo,
        hi
    );
    let prov = Provenance::new(command, Some(args.master_seed));

    if let Some(path) = &args.out {
        match args.format {
            Format::Csv => report::write_text(path, &spectrum_csv(&r, &prov))?,
            Format::Json => report::write_json(
                path,
                &SpectrumDoc {
                    schema: "sriplab-spectrum-v1",
                    provenance: prov_clone(&prov),
                    summary: SpectrumSummary {
                        p: r.p,
                        n: r.n,
                        trials: r.trials,
                        ks: r.ks,
                        moments: r.moments,
                    },
                    eigenvalues: r.pooled.clone(),
                },
            )?,
        }
    }
    if let Some(path) = &args.svg {
        let figure = render_histogram(
            &r.pooled,
            &HistogramSpec {
                bins: args.bins,
                lo,
                hi,
            },
            &prov.text(),
        );
        report::write_text(path, &figure)?;
    }
    Ok(())
}

fn prov_clone(p: &Provenance) -> Provenance {
    Provenance::new(p.command.clone(), p.master_seed)
}

pub fn decay(args: &DecayCmd) -> Result<()> {
    if args.primes.len() < 2 {
        bail!("invalid configuration (primes): at least two primes are required");
    }
    let family = args.family;
    let master_seed = args.master_seed;
    let builder = move |p: Prime| -> sriplab_core::Result<Dictionary> {
        match family {
            Family::Heisenberg => Ok(Dictionary::build_heisenberg(p)),
            Family::SingleBasis => Dictionary::build_random_onb_union(p, 1, master_seed),
        }
    };
    let fit = estimate_decay(builder, &args.primes, args.epsilon, args.trials, master_seed)?;
    for pt in &fit.points {
        println!("p = {} n = {} p_hat = {}", pt.p, pt.n, num(pt.p_hat));
    }
    println!(
        "slope = {} intercept = {} primes_used = {} primes_zero = {}",
        num(fit.slope),
        num(fit.intercept),
        fit.primes_used,
        fit.primes_zero
    );

    if let Some(path) = &args.out {
        let primes_text = args
            .primes
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let command = format!(
            "decay --primes {} --epsilon {} --family {} --trials {} --master-seed {}",
            primes_text,
            args.epsilon,
            args.family.name(),
            args.trials,
            master_seed
        );
        let prov = Provenance::new(command, Some(master_seed));
        match args.format {
            Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "{}", prov.comment_line());
                let _ = writeln!(
                    out,
                    "record,p,n,p_hat,epsilon,slope,intercept,primes_used,primes_zero"
                );
                for pt in &fit.points {
                    let _ = writeln!(out, "point,{},{},{},,,,,", pt.p, pt.n, num(pt.p_hat));
                }
                let _ = writeln!(
                    out,
                    "fit,,,,{},{},{},{},{}",
                    num(fit.epsilon),
                    num(fit.slope),
                    num(fit.intercept),
                    fit.primes_used,
                    fit.primes_zero
                );
                report::write_text(path, &out)?;
            }
            Format::Json => {
                #[derive(Serialize)]
                struct PointDoc {
                    p: u64,
                    n: usize,
                    p_hat: f64,
                }
                #[derive(Serialize)]
                struct DecayDoc {
                    schema: &'static str,
                    provenance: Provenance,
                    epsilon: f64,
                    slope: f64,
                    intercept: f64,
                    primes_used: usize,
                    primes_zero: usize,
                    points: Vec<PointDoc>,
                }
                report::write_json(
                    path,
                    &DecayDoc {
                        schema: "sriplab-decay-v1",
                        provenance: prov,
                        epsilon: fit.epsilon,
                        slope: fit.slope,
                        intercept: fit.intercept,
                        primes_used: fit.primes_used,
                        primes_zero: fit.primes_zero,
                        points: fit
                            .points
                            .iter()
                            .map(|pt| PointDoc {
                                p: pt.p,
                                n: pt.n,
                                p_hat: pt.p_hat,
                            })
                            .collect(),
                    },
                )?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<Complex64> for Cx {
    fn from(c: Complex64) -> Self {
        Cx { re: c.re, im: c.im }
    }
}

#[derive(Serialize)]
struct PlantedDoc {
    support: Vec<String>,
    coefficients: Vec<Cx>,
}

#[derive(Serialize)]
struct RecoveryDoc {
    support_found: Vec<String>,
    coefficients: Vec<Cx>,
    residual_norm: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct RecoverReport {
    schema: &'static str,
    provenance: Provenance,
    p: u64,
    sparsity: usize,
    tol: f64,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    planted: Option<PlantedDoc>,
    result: RecoveryDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_recovery: Option<bool>,
}

fn read_signal(path: &Path, p: usize) -> Result<Vec<Complex64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(':')
            .ok_or_else(|| anyhow!("{}:{}: expected re:im", path.display(), i + 1))?;
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|e| anyhow!("{}:{}: bad number `{s}`: {e}", path.display(), i + 1))
        };
        v.push(Complex64::new(parse(re)?, parse(im)?));
    }
    if v.len() != p {
        bail!(
            "{}: signal has {} entries, dictionary dimension is {p}",
            path.display(),
            v.len()
        );
    }
    Ok(v)
}

pub fn recover(args: &RecoverCmd) -> Result<()> {
    if args.format == Format::Csv {
        bail!("invalid configuration (format): recover emits json only");
    }
    let d = args.dict.build()?;
    let p = d.p().as_usize();

    let (y, planted_ids, planted_coeffs) = match &args.input {
        Some(path) => (read_signal(path, p)?, None, None),
        None => {
            let support = sample_support(&d, args.sparsity, args.signal_seed, args.policy.into())?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.signal_seed ^ COEFF_SEED_XOR);
            let coeffs: Vec<Complex64> = support
                .ids()
                .iter()
                .map(|_| {
                    let mag = 0.5 + 1.5 * rng.gen::<f64>();
                    let phase = std::f64::consts::TAU * rng.gen::<f64>();
                    Complex64::from_polar(mag, phase)
                })
                .collect();
            let f = CoefficientVector::from_entries(
                support.ids().iter().copied().zip(coeffs.iter().copied()),
            );
            let y = resolution_apply(&d, &f)?;
            (y, Some(support.ids().to_vec()), Some(f))
        }
    };

    let r = omp(&d, &y, args.sparsity, args.tol)?;

    let exact_recovery = planted_ids.as_ref().map(|ids| {
        let f = planted_coeffs.as_ref().expect("planted coefficients");
        let mut found = r.support_found.clone();
        found.sort();
        found == *ids
            && r.support_found
                .iter()
                .zip(r.coefficients.iter())
                .all(|(id, c)| (c - f.get(*id)).norm() < 1e-6)
    });

    let (mode, command) = match &args.input {
        Some(path) => (
            "file",
            format!(
                "recover {} --input {} --sparsity {} --tol {}",
                args.dict.describe(),
                path.display(),
                args.sparsity,
                args.tol
            ),
        ),
        None => (
            "synthetic",
            format!(
                "recover {} --sparsity {} --signal-seed {} --policy {} --tol {}",
                args.dict.describe(),
                args.sparsity,
                args.signal_seed,
                args.policy.name(),
                args.tol
            ),
        ),
    };
    let master_seed = args.input.is_none().then_some(args.signal_seed);
    let doc = RecoverReport {
        schema: "sriplab-recover-v1",
        provenance: Provenance::new(command, master_seed),
        p: d.p().get(),
        sparsity: args.sparsity,
        tol: args.tol,
        mode,
        planted: planted_ids.as_ref().map(|ids| {
            let f = planted_coeffs.as_ref().expect("planted coefficients");
            PlantedDoc {
                support: ids.iter().map(AtomId::to_string).collect(),
                coefficients: ids.iter().map(|&id| f.get(id).into()).collect(),
            }
        }),
        result: RecoveryDoc {
            support_found: r.support_found.iter().map(AtomId::to_string).collect(),
            coefficients: r.coefficients.iter().map(|&c| c.into()).collect(),
            residual_norm: r.residual_norm,
            iterations: r.iterations,
        },
        exact_recovery,
    };

    match &args.out {
        Some(path) => report::write_json(path, &doc)?,
        None => print!("{}", report::to_json_string(&doc)?),
    }
    Ok(())
}

pub fn rip_exact(args: &RipExactCmd) -> Result<()> {
    if args.format == Format::Csv {
        bail!("invalid configuration (format): rip-exact emits json only");
    }
    let d = args.dict.build()?;
    let r = rip_exact_check(&d, args.n_max, args.budget)?;
    let witness: Vec<String> = r
        .argmax_support
        .ids()
        .iter()
        .map(AtomId::to_string)
        .collect();
    println!(
        "n_max = {} delta = {} delta_upper = {} delta_lower = {}",
        r.n_max,
        num(r.delta),
        num(r.delta_upper),
        num(r.delta_lower)
    );
    println!("witness = [{}]", witness.join(", "));

    if let Some(path) = &args.out {
        #[derive(Serialize)]
        struct RipDoc {
            schema: &'static str,
            provenance: Provenance,
            p: u64,
            n_max: usize,
            budget: u64,
            delta: f64,
            delta_upper: f64,
            delta_lower: f64,
            witness: Vec<String>,
        }
        let command = format!(
            "rip-exact {} --n-max {} --budget {}",
            args.dict.describe(),
            args.n_max,
            args.budget
        );
        report::write_json(
            path,
            &RipDoc {
                schema: "sriplab-rip-exact-v1",
                provenance: Provenance::new(command, None),
                p: d.p().get(),
                n_max: r.n_max,
                budget: args.budget,
                delta: r.delta,
                delta_upper: r.delta_upper,
                delta_lower: r.delta_lower,
                witness,
            },
        )?;
    }
    Ok(())
}
