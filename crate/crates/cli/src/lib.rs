//! Report building and rendering for the `kneser-sandpile` command.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use kneser_sandpile::formulas::order_valuation;
use kneser_sandpile::mtx::{read_matrix_market, write_matrix_market};
use kneser_sandpile::{
    critical_group_order, kneser_graph, laplacian_matrix, mbar_filtration, predict_with_branch,
    predicted_critical_group, prime_divisors, select_branch, smith_normal_form,
    spanning_tree_count, spectral_data, trivial_profile, valuation, verify_eigenspace_bound,
    verify_mdim_identity, BigInt, ElementaryDivisorProfile, Error, MbarFiltration, MtxFormat,
};
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Certification(_) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Arbitrary-precision integer emitted as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = self
            .0
            .to_string()
            .parse()
            .map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl std::fmt::Display for Int {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeReport {
    pub p: u64,
    pub branch: String,
    pub computed_e: Vec<usize>,
    pub predicted_e: Vec<usize>,
    pub mdim_ok: bool,
    pub eigenbound_ok: bool,
}

impl PrimeReport {
    pub fn passed(&self) -> bool {
        self.computed_e == self.predicted_e && self.mdim_ok && self.eigenbound_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub build_ms: f64,
    pub snf_ms: f64,
    pub predict_ms: f64,
    pub filtration_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: u64,
    pub computed_factors: Vec<Int>,
    pub predicted_factors: Vec<Int>,
    pub order: Int,
    pub spanning_trees: Int,
    pub per_prime: Vec<PrimeReport>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub i_max_extra: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            i_max_extra: 1,
            timings: false,
        }
    }
}

/// Primes dividing the closed-form order.
pub fn order_primes(n: u64) -> CliResult<Vec<u64>> {
    let mut ps: Vec<u64> = [n, n - 1, n - 3, n - 4]
        .iter()
        .flat_map(|&m| prime_divisors(m))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        if order_valuation(n, p)? > 0 {
            out.push(p);
        }
    }
    Ok(out)
}

/// Filtration depth: past the largest exponent in play and past the
/// valuations of both nonzero eigenvalues, plus `extra`.
pub fn filtration_depth(n: u64, p: u64, max_exponent: usize, extra: usize) -> CliResult<usize> {
    let sd = spectral_data(n)?;
    let vr = valuation(&BigInt::from(sd.r), p)? as usize;
    let vs = valuation(&BigInt::from(sd.s), p)? as usize;
    Ok((max_exponent.max(vr).max(vs) + extra).max(1))
}

fn eigenbounds_hold(n: u64, p: u64, filt: &MbarFiltration) -> CliResult<bool> {
    let sd = spectral_data(n)?;
    for (u, b) in [(sd.r, sd.f), (sd.s, sd.g)] {
        let u = BigInt::from(u);
        if valuation(&u, p)? == 0 {
            continue;
        }
        if !verify_eigenspace_bound(n, p, &u, b as usize, filt)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Runs the full comparison for `KG(n, 2)`.
pub fn verify_n(n: u64, opts: VerifyOptions) -> CliResult<VerificationReport> {
    if n < 5 {
        return Err(CliError::Usage(format!(
            "n = {n} is below the supported range n >= 5"
        )));
    }
    let t = Instant::now();
    let g = kneser_graph(n as usize, 2)?;
    let l = laplacian_matrix(&g);
    let build_ms = ms(t);

    let t = Instant::now();
    let snf = smith_normal_form(&l, false);
    let group = snf.cokernel();
    let trees = spanning_tree_count(&g);
    let snf_ms = ms(t);

    let t = Instant::now();
    let predicted = predicted_critical_group(n)?.normalized();
    let order = critical_group_order(n)?;
    let primes = order_primes(n)?;
    let mut predictions = Vec::with_capacity(primes.len());
    for &p in &primes {
        predictions.push(predict_with_branch(n, p)?);
    }
    let predict_ms = ms(t);

    let t = Instant::now();
    let mut per_prime = Vec::with_capacity(primes.len());
    for (&p, (branch, predicted_e)) in primes.iter().zip(predictions) {
        let computed_e = ElementaryDivisorProfile::from_smith(&snf, p)?;
        let depth = filtration_depth(
            n,
            p,
            predicted_e.max_exponent().max(computed_e.max_exponent()),
            opts.i_max_extra,
        )?;
        let filt = mbar_filtration(&l, p, depth)?;
        per_prime.push(PrimeReport {
            p,
            branch: branch.to_string(),
            mdim_ok: verify_mdim_identity(&computed_e, &filt)?,
            eigenbound_ok: eigenbounds_hold(n, p, &filt)?,
            computed_e: computed_e.multiplicities,
            predicted_e: predicted_e.multiplicities,
        });
    }
    let filtration_ms = ms(t);

    let pass = group.invariant_factors == predicted
        && group.torsion_order() == order
        && trees == order
        && per_prime.iter().all(PrimeReport::passed);
    Ok(VerificationReport {
        n,
        computed_factors: ints(&group.invariant_factors),
        predicted_factors: ints(&predicted),
        order: Int(order),
        spanning_trees: Int(trees),
        per_prime,
        status: if pass { Status::Pass } else { Status::Fail },
        timings: opts.timings.then_some(Timings {
            build_ms,
            snf_ms,
            predict_ms,
            filtration_ms,
        }),
    })
}

/// Verifies every `n` in `n_min..=n_max` on `jobs` worker threads; results
/// come back in ascending `n`.
pub fn verify_range(
    n_min: u64,
    n_max: u64,
    jobs: Option<usize>,
    opts: VerifyOptions,
) -> CliResult<Vec<VerificationReport>> {
    use rayon::prelude::*;
    if n_min < 5 || n_min > n_max {
        return Err(CliError::Usage(format!(
            "need 5 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| {
        (n_min..=n_max)
            .into_par_iter()
            .map(|n| verify_n(n, opts))
            .collect()
    })
}

pub fn render_verify(reports: &[VerificationReport], format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(to_json(&reports)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec![
                "n",
                "status",
                "order",
                "spanning_trees",
                "computed_factors",
                "predicted_factors",
                "p",
                "branch",
                "computed_e",
                "predicted_e",
                "mdim_ok",
                "eigenbound_ok",
            ];
            let timed = reports.iter().any(|r| r.timings.is_some());
            if timed {
                header.extend(["build_ms", "snf_ms", "predict_ms", "filtration_ms"]);
            }
            w.write_record(&header)?;
            for r in reports {
                for pr in &r.per_prime {
                    let mut row = vec![
                        r.n.to_string(),
                        r.status.to_string(),
                        r.order.to_string(),
                        r.spanning_trees.to_string(),
                        join(&r.computed_factors),
                        join(&r.predicted_factors),
                        pr.p.to_string(),
                        pr.branch.clone(),
                        join(&pr.computed_e),
                        join(&pr.predicted_e),
                        pr.mdim_ok.to_string(),
                        pr.eigenbound_ok.to_string(),
                    ];
                    if let Some(t) = &r.timings {
                        row.extend(
                            [t.build_ms, t.snf_ms, t.predict_ms, t.filtration_ms]
                                .map(|x| x.to_string()),
                        );
                    }
                    w.write_record(&row)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(
                    out,
                    "KG({},2): {}",
                    r.n,
                    r.status.to_string().to_uppercase()
                );
                let _ = writeln!(out, "  computed:  {}", join(&r.computed_factors));
                let _ = writeln!(out, "  predicted: {}", join(&r.predicted_factors));
                let _ = writeln!(
                    out,
                    "  order: {}  spanning trees: {}",
                    r.order, r.spanning_trees
                );
                for pr in &r.per_prime {
                    let _ = writeln!(
                        out,
                        "  p={}: {}; e computed [{}] predicted [{}]; mdim {}; eigenbound {}",
                        pr.p,
                        pr.branch,
                        join(&pr.computed_e),
                        join(&pr.predicted_e),
                        ok(pr.mdim_ok),
                        ok(pr.eigenbound_ok)
                    );
                }
                if let Some(t) = &r.timings {
                    let _ = writeln!(
                        out,
                        "  ms: build {} snf {} predict {} filtration {}",
                        t.build_ms, t.snf_ms, t.predict_ms, t.filtration_ms
                    );
                }
            }
            let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
            let _ = writeln!(out, "{passed}/{} passed", reports.len());
            Ok(out)
        }
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub n: u64,
    pub invariant_factors: Vec<Int>,
    pub free_rank: usize,
    pub order: Int,
    pub spanning_trees: Int,
}

pub fn group_report(n: u64) -> CliResult<GroupReport> {
    if n < 2 {
        return Err(CliError::Usage(format!("KG({n},2) has no vertices")));
    }
    let g = kneser_graph(n as usize, 2)?;
    let group = smith_normal_form(&laplacian_matrix(&g), false).cokernel();
    Ok(GroupReport {
        n,
        order: Int(group.torsion_order()),
        invariant_factors: ints(&group.invariant_factors),
        free_rank: group.free_rank,
        spanning_trees: Int(spanning_tree_count(&g)),
    })
}

pub fn render_group(r: &GroupReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(to_json(r)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "invariant_factors",
                "free_rank",
                "order",
                "spanning_trees",
            ])?;
            w.write_record([
                r.n.to_string(),
                join(&r.invariant_factors),
                r.free_rank.to_string(),
                r.order.to_string(),
                r.spanning_trees.to_string(),
            ])?;
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Text => {
            let torsion = if r.invariant_factors.is_empty() {
                "trivial".to_string()
            } else {
                join(&r.invariant_factors)
            };
            Ok(format!(
                "KG({},2)\ninvariant factors: {torsion}\nfree rank: {}\norder: {}\nspanning trees: {}\n",
                r.n, r.free_rank, r.order, r.spanning_trees
            ))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SnfReport {
    pub rows: usize,
    pub cols: usize,
    pub diagonal: Vec<Int>,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transforms: Option<[String; 2]>,
}

/// Smith form of a Matrix Market file. With `transforms_dir`, writes `U` and
/// `V` next to the input stem and certifies `U M V = S` first.
pub fn snf_report(path: &Path, transforms_dir: Option<&Path>) -> CliResult<SnfReport> {
    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |source| CliError::Io { path: p, source }
    };
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let m = read_matrix_market(std::io::BufReader::new(file))?;
    let snf = smith_normal_form(&m, transforms_dir.is_some());
    let mut transforms = None;
    if let Some(dir) = transforms_dir {
        if !snf.certify(&m) {
            return Err(CliError::Certification(format!(
                "U M V != S for {}",
                path.display()
            )));
        }
        let (u, v) = snf.transforms.as_ref().expect("transforms requested");
        let stem = path
            .file_stem()
            .map_or("matrix".into(), |s| s.to_string_lossy());
        let mut written = Vec::new();
        for (name, t) in [("U", u), ("V", v)] {
            let out = dir.join(format!("{stem}.{name}.mtx"));
            let f = std::fs::File::create(&out).map_err(io_err(&out))?;
            write_matrix_market(t, MtxFormat::Coordinate, std::io::BufWriter::new(f))
                .map_err(io_err(&out))?;
            written.push(out.display().to_string());
        }
        transforms = Some([written[0].clone(), written[1].clone()]);
    }
    Ok(SnfReport {
        rows: snf.rows(),
        cols: snf.cols(),
        diagonal: ints(&snf.diagonal),
        rank: snf.rank,
        transforms,
    })
}

pub fn render_snf(r: &SnfReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(to_json(r)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "diagonal"])?;
            for (i, d) in r.diagonal.iter().enumerate() {
                w.write_record([(i + 1).to_string(), d.to_string()])?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Text => {
            let mut out = format!("{}\n", join(&r.diagonal));
            if let Some([u, v]) = &r.transforms {
                let _ = writeln!(out, "certified U M V = S; wrote {u} and {v}");
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub n: u64,
    pub p: u64,
    pub branch: Option<String>,
    pub computed_e: Vec<usize>,
    pub predicted_e: Vec<usize>,
    pub filtration: Vec<usize>,
    pub kernel_dim: usize,
    pub mdim_ok: bool,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn profile_report(n: u64, p: u64, i_max_extra: usize) -> CliResult<ProfileReport> {
    if n < 5 {
        return Err(CliError::Usage(format!(
            "n = {n} is below the supported range n >= 5"
        )));
    }
    if !kneser_sandpile::is_prime(p) {
        return Err(CliError::Usage(format!("{p} is not prime")));
    }
    let (branch, predicted, note) = match select_branch(n, p) {
        Ok(_) => {
            let (b, prof) = predict_with_branch(n, p)?;
            (Some(b.to_string()), prof, None)
        }
        Err(Error::PrimeDoesNotDivide { .. }) => (
            None,
            trivial_profile(n, p)?,
            Some(format!(
                "{p} does not divide the order of K(KG({n},2)); the profile is trivial"
            )),
        ),
        Err(e) => return Err(e.into()),
    };
    let l = laplacian_matrix(&kneser_graph(n as usize, 2)?);
    let snf = smith_normal_form(&l, false);
    let computed = ElementaryDivisorProfile::from_smith(&snf, p)?;
    let depth = filtration_depth(
        n,
        p,
        predicted.max_exponent().max(computed.max_exponent()),
        i_max_extra,
    )?;
    let filt = mbar_filtration(&l, p, depth)?;
    Ok(ProfileReport {
        n,
        p,
        branch,
        mdim_ok: verify_mdim_identity(&computed, &filt)?,
        matches: computed == predicted,
        computed_e: computed.multiplicities,
        predicted_e: predicted.multiplicities,
        filtration: filt.dims,
        kernel_dim: filt.kernel_dim,
        note,
    })
}

impl ProfileReport {
    pub fn passed(&self) -> bool {
        self.matches && self.mdim_ok
    }
}

pub fn render_profile(r: &ProfileReport, format: Format) -> CliResult<String> {
    let rows = r
        .computed_e
        .len()
        .max(r.predicted_e.len())
        .max(r.filtration.len());
    let at = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0);
    match format {
        Format::Json => Ok(to_json(r)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "p",
                "branch",
                "i",
                "computed_e",
                "predicted_e",
                "dim_mbar",
            ])?;
            for i in 0..rows {
                w.write_record([
                    r.n.to_string(),
                    r.p.to_string(),
                    r.branch.clone().unwrap_or_else(|| "trivial".into()),
                    i.to_string(),
                    at(&r.computed_e, i).to_string(),
                    at(&r.predicted_e, i).to_string(),
                    r.filtration.get(i).map_or(String::new(), usize::to_string),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Text => {
            let mut out = format!("KG({},2) at p = {}\n", r.n, r.p);
            match (&r.branch, &r.note) {
                (Some(b), _) => {
                    let _ = writeln!(out, "branch: {b}");
                }
                (None, Some(note)) => {
                    let _ = writeln!(out, "note: {note}");
                }
                (None, None) => {}
            }
            let _ = writeln!(
                out,
                "{:>3} {:>9} {:>10} {:>9}",
                "i", "computed", "predicted", "dim Mbar"
            );
            for i in 0..rows {
                let dim = r.filtration.get(i).map_or("-".into(), usize::to_string);
                let _ = writeln!(
                    out,
                    "{i:>3} {:>9} {:>10} {dim:>9}",
                    at(&r.computed_e, i),
                    at(&r.predicted_e, i)
                );
            }
            let _ = writeln!(out, "kernel dim: {}", r.kernel_dim);
            let _ = writeln!(out, "mdim identity: {}", ok(r.mdim_ok));
            let _ = writeln!(out, "{}", if r.matches { "match" } else { "MISMATCH" });
            Ok(out)
        }
    }
}
