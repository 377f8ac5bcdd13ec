//! Command implementations.
//!
//! Each command is a pure function from validated arguments to a
//! [`CommandOutput`]: a human-readable table, a list of machine
//! records, and any non-fatal warnings. Printing and exit codes live in
//! `main`; keeping the functions pure lets the verification suite and
//! the integration tests drive them directly and compare emitted bytes.

use clap::{Args, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use vinogradov::arcs::{
    self, dissection_cutoffs, major_arc_error_probe, splitmix64, unit_f64, weyl_probe, WLabel,
};
use vinogradov::count::{count_naive, read_table, write_table, RepresentationTable};
use vinogradov::domain::{congruence_soluble, Budget, Offset, Params};
use vinogradov::error::Error;
use vinogradov::integral::{
    combined_comparison_error, real_density_oracle, singular_integral_truncated, NormalizedOffset,
};
use vinogradov::local::{padic_density_via_counting, padic_density_via_sums, singular_series_truncated};

use crate::record::{offset_json, Method, ResultRecord};

/// Everything a command produces; the caller decides where it goes.
pub struct CommandOutput {
    pub records: Vec<ResultRecord>,
    pub human: String,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    pub(crate) fn new() -> Self {
        Self {
            records: Vec::new(),
            human: String::new(),
            warnings: Vec::new(),
        }
    }

    pub(crate) fn line(&mut self, text: impl AsRef<str>) {
        self.human.push_str(text.as_ref());
        self.human.push('\n');
    }
}

/// Parse `a,b,c` into an offset.
pub fn parse_offset(text: &str) -> Result<Offset, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected h1,h2,h3 — got `{text}`"));
    }
    let mut h = [0i64; 3];
    for (slot, part) in h.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad offset component `{part}`: {e}"))?;
    }
    Ok(Offset::new(h[0], h[1], h[2]))
}

/// Parse `a,b,c` into a real triple.
pub fn parse_triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected n1,n2,n3 — got `{text}`"));
    }
    let mut n = [0f64; 3];
    for (slot, part) in n.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad component `{part}`: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("component `{part}` is not finite"));
        }
    }
    Ok(n)
}

pub(crate) fn fmt_duration(d: Duration) -> String {
    if d.as_secs() >= 1 {
        format!("{:.2}s", d.as_secs_f64())
    } else {
        format!("{:.1}ms", d.as_secs_f64() * 1e3)
    }
}

/// Load a representation table from the cache or build it, writing the
/// cache entry on a miss. Corrupt cache files are reported as warnings
/// and rebuilt — the cache is an optimization, never an authority.
pub fn obtain_table(
    s: u32,
    x: u64,
    cache_dir: Option<&Path>,
    budget: &Budget,
    warnings: &mut Vec<String>,
) -> Result<(RepresentationTable, bool), Error> {
    let params = Params::new(s, x)?;
    if let Some(dir) = cache_dir {
        let path = dir.join(format!("table-s{s}-x{x}.vintab"));
        if path.exists() {
            match read_table(&path, s, x) {
                Ok(table) => return Ok((table, true)),
                Err(e) => warnings.push(format!(
                    "cache file {} ignored ({e}); rebuilding",
                    path.display()
                )),
            }
        }
        let table = RepresentationTable::build(params, budget)?;
        if let Err(e) = std::fs::create_dir_all(dir) {
            warnings.push(format!("cannot create cache dir {}: {e}", dir.display()));
            return Ok((table, false));
        }
        if let Err(e) = write_table(&path, &table) {
            warnings.push(format!("cannot write cache file {}: {e}", path.display()));
        }
        Ok((table, false))
    } else {
        Ok((RepresentationTable::build(params, budget)?, false))
    }
}

// ---------------------------------------------------------------------
// count
// ---------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct CountArgs {
    /// Number of variables on each side of the system.
    #[arg(long)]
    pub s: u32,
    /// Range bound X; a comma-separated list runs each value.
    #[arg(long = "X", value_name = "X", value_delimiter = ',', required = true)]
    pub x: Vec<u64>,
    /// Offset triple h1,h2,h3.
    #[arg(long, value_parser = parse_offset)]
    pub h: Option<Offset>,
    /// Run every offset with |h_j| <= R instead of a single offset.
    #[arg(long = "h-box", value_name = "R", conflicts_with = "h")]
    pub h_box: Option<u32>,
    /// Use direct enumeration instead of the table route.
    #[arg(long)]
    pub naive: bool,
}

pub fn cmd_count(args: &CountArgs, cache_dir: Option<&Path>) -> Result<CommandOutput, Error> {
    let budget = Budget::default();
    let mut out = CommandOutput::new();
    let offsets: Vec<Offset> = match (args.h, args.h_box) {
        (Some(h), None) => vec![h],
        (None, Some(r)) => {
            if r > 8 {
                return Err(Error::Config(format!(
                    "offset box radius {r} too large; use R <= 8"
                )));
            }
            let r = r as i64;
            let mut v = Vec::new();
            for h1 in -r..=r {
                for h2 in -r..=r {
                    for h3 in -r..=r {
                        v.push(Offset::new(h1, h2, h3));
                    }
                }
            }
            v
        }
        (None, None) => {
            return Err(Error::Config("provide --h or --h-box".into()));
        }
        (Some(_), Some(_)) => unreachable!("clap forbids --h with --h-box"),
    };
    let route = if args.naive { "naive" } else { "table" };
    out.line(format!("count: s={} route={route}", args.s));
    for &x in &args.x {
        let params = Params::new(args.s, x)?;
        let table = if args.naive {
            None
        } else {
            let started = Instant::now();
            let (table, hit) = obtain_table(args.s, x, cache_dir, &budget, &mut out.warnings)?;
            out.line(format!(
                "  X={x}: table with {} moment classes ({}, {})",
                table.distinct_moments(),
                if hit { "cache hit" } else { "built" },
                fmt_duration(started.elapsed()),
            ));
            Some(table)
        };
        for h in &offsets {
            let started = Instant::now();
            let value = match &table {
                Some(t) => t.twisted_pair_count(h),
                None => count_naive(params, h, &budget)?.value,
            };
            let elapsed = started.elapsed();
            out.line(format!(
                "  X={x} h=({},{},{})  B = {value}  [{}]",
                h.h1,
                h.h2,
                h.h3,
                fmt_duration(elapsed),
            ));
            out.records.push(
                ResultRecord::new("count")
                    .input("s", args.s)
                    .input("X", x)
                    .input("h", offset_json(h))
                    .input("route", route)
                    .count_output("value", value)
                    .elapsed(elapsed),
            );
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// asymptotic
// ---------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct AsymptoticArgs {
    /// Number of variables per side (the limit theorem needs s >= 4).
    #[arg(long, default_value_t = 6)]
    pub s: u32,
    /// Ascending list of range bounds.
    #[arg(long = "X", value_name = "X", value_delimiter = ',', required = true)]
    pub x: Vec<u64>,
    /// Offset triple h1,h2,h3.
    #[arg(long, value_parser = parse_offset, required = true)]
    pub h: Offset,
    /// Truncation of the local-factor series.
    #[arg(long, default_value_t = 32)]
    pub qmax: u64,
    /// Truncation half-width of the frequency cube.
    #[arg(long = "B", default_value_t = 16.0)]
    pub b: f64,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

pub fn cmd_asymptotic(
    args: &AsymptoticArgs,
    cache_dir: Option<&Path>,
) -> Result<CommandOutput, Error> {
    if !(4..=8).contains(&args.s) {
        return Err(Error::Config(
            "the asymptotic prediction needs 4 <= s <= 8".into(),
        ));
    }
    if args.x.is_empty() || args.x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("--X must be a strictly ascending list".into()));
    }
    let h = args.h;
    if !congruence_soluble(&h) {
        return Err(Error::Config(format!(
            "offset ({},{},{}) is congruence-insoluble: the count vanishes for every X and no \
             asymptotic applies",
            h.h1, h.h2, h.h3
        )));
    }
    let budget = Budget::default();
    let mut out = CommandOutput::new();
    let exponent = 2 * args.s as i32 - 6;
    let sigma = singular_series_truncated(args.s, &h, args.qmax, &budget)?;
    out.line(format!(
        "asymptotic: s={} h=({},{},{})  series factor = {:.9} (qmax={}, tail ~ {})",
        args.s,
        h.h1,
        h.h2,
        h.h3,
        sigma.value,
        args.qmax,
        sigma
            .tail_estimate
            .map_or("n/a".to_string(), |t| format!("{t:.2e}")),
    ));
    let mut ratios: Vec<f64> = Vec::new();
    for &x in &args.x {
        let started = Instant::now();
        let (table, _) = obtain_table(args.s, x, cache_dir, &budget, &mut out.warnings)?;
        let value = table.twisted_pair_count(&h);
        let ratio = value as f64 / (x as f64).powi(exponent);
        let n = NormalizedOffset::from_offset(&h, x);
        let jay = singular_integral_truncated(args.s, &n, args.b, args.tol)?;
        let product = sigma.value * jay.value;
        let elapsed = started.elapsed();
        out.line(format!(
            "  X={x}: B = {value}  ratio = {ratio:.6}  integral = {:.6}  predicted = {product:.6}  [{}]",
            jay.value,
            fmt_duration(elapsed),
        ));
        out.records.push(
            ResultRecord::new("asymptotic")
                .input("s", args.s)
                .input("X", x)
                .input("h", offset_json(&h))
                .input("qmax", args.qmax)
                .input("B", args.b)
                .input("tol", args.tol)
                .count_output("value", value)
                .output("ratio", ratio, Method::ExactCount)
                .output("series_factor", sigma.value, Method::TruncatedSeries)
                .output("integral_factor", jay.value, Method::Quadrature)
                .output(
                    "integral_tail",
                    jay.tail_estimate
                        .map_or(serde_json::Value::Null, |t| serde_json::json!(t)),
                    Method::Quadrature,
                )
                .output("predicted", product, Method::TruncatedSeries)
                .elapsed(elapsed),
        );
        ratios.push(ratio);
    }
    let diffs: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let shrinking = diffs.windows(2).all(|w| w[1] < w[0]);
    out.line(format!(
        "  ratio differences: {:?}  strictly decreasing: {shrinking}",
        diffs.iter().map(|d| format!("{d:.6}")).collect::<Vec<_>>(),
    ));
    out.records.push(
        ResultRecord::new("asymptotic-trend")
            .input("s", args.s)
            .input("h", offset_json(&h))
            .input("X", serde_json::json!(args.x))
            .output("ratio_differences", serde_json::json!(diffs), Method::ExactCount)
            .output("strictly_decreasing", shrinking, Method::ExactCount),
    );
    Ok(out)
}

// ---------------------------------------------------------------------
// dissect
// ---------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct DissectArgs {
    /// Scale parameter X governing arc widths.
    #[arg(long = "X", default_value_t = 1_000_000)]
    pub x: u64,
    /// Number of sampled phase points.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Sampling seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn cmd_dissect(args: &DissectArgs) -> Result<CommandOutput, Error> {
    if args.x < 2 {
        return Err(Error::Config("dissection needs X >= 2".into()));
    }
    let mut out = CommandOutput::new();
    let started = Instant::now();
    let (l, q) = dissection_cutoffs(args.x as f64);
    let mut histogram = [0u64; 4];
    let mut deep_points_in_major = true;
    for i in 0..args.samples {
        let base = splitmix64(args.seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let alpha = [
            unit_f64(splitmix64(base ^ 1)),
            unit_f64(splitmix64(base ^ 2)),
            unit_f64(splitmix64(base ^ 3)),
        ];
        let label = arcs::partition_label(&alpha, args.x);
        let slot = match label {
            WLabel::W1 => 0,
            WLabel::W2 => 1,
            WLabel::W3 => 2,
            WLabel::W4 => 3,
        };
        histogram[slot] += 1;
        // Independent re-check of the containment: every deepest-region
        // point must sit on a one-dimensional major arc in its third
        // coordinate, at the partition's own modulus cutoff.
        if label == WLabel::W4 && !arcs::classify_one_dim(alpha[2], q, args.x as f64).is_major() {
            deep_points_in_major = false;
        }
    }
    let elapsed = started.elapsed();
    let total: u64 = histogram.iter().sum();
    out.line(format!(
        "dissect: X={} L={l:.4} Q={q:.4} samples={} seed={}",
        args.x, args.samples, args.seed
    ));
    out.line(format!(
        "  W1={} W2={} W3={} W4={}  (partition: {})  deep region inside major arcs: {}",
        histogram[0],
        histogram[1],
        histogram[2],
        histogram[3],
        total == args.samples,
        deep_points_in_major,
    ));
    out.line(format!("  [{}]", fmt_duration(elapsed)));
    out.records.push(
        ResultRecord::new("dissect")
            .input("X", args.x)
            .input("samples", args.samples)
            .seed(args.seed)
            .output("cutoff_l", l, Method::ExactCount)
            .output("cutoff_q", q, Method::ExactCount)
            .output("w1", histogram[0], Method::MonteCarlo)
            .output("w2", histogram[1], Method::MonteCarlo)
            .output("w3", histogram[2], Method::MonteCarlo)
            .output("w4", histogram[3], Method::MonteCarlo)
            .output("labels_partition", total == args.samples, Method::ExactCount)
            .output(
                "deep_region_in_major",
                deep_points_in_major,
                Method::ExactCount,
            )
            .elapsed(elapsed),
    );
    Ok(out)
}

// ---------------------------------------------------------------------
// weyl
// ---------------------------------------------------------------------

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    /// Minor-arc sup probe of the cubic exponential sum.
    Minor,
    /// Major-arc approximation-error probe.
    Major,
    /// Both probes.
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct WeylArgs {
    /// Range bound(s).
    #[arg(long = "X", value_name = "X", value_delimiter = ',', default_values_t = vec![1_000u64, 10_000, 100_000])]
    pub x: Vec<u64>,
    /// Minor-arc modulus cutoff; defaults to the dissection cutoff Q(X).
    #[arg(long)]
    pub q: Option<f64>,
    /// Number of sampled points per X.
    #[arg(long, default_value_t = 2_000)]
    pub samples: u64,
    /// Sampling seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Which probe family to run.
    #[arg(long, value_enum, default_value_t = ProbeKind::Minor)]
    pub probe: ProbeKind,
}

pub fn cmd_weyl(args: &WeylArgs) -> Result<CommandOutput, Error> {
    if args.x.iter().any(|&x| x < 2) {
        return Err(Error::Config("probes need X >= 2".into()));
    }
    let mut out = CommandOutput::new();
    for &x in &args.x {
        if matches!(args.probe, ProbeKind::Minor | ProbeKind::Both) {
            let q = args.q.unwrap_or_else(|| dissection_cutoffs(x as f64).1);
            if !(q >= 1.0) || !q.is_finite() {
                return Err(Error::Config("cutoff --q must be >= 1".into()));
            }
            let started = Instant::now();
            let report = weyl_probe(x, q, args.samples, args.seed);
            let elapsed = started.elapsed();
            out.line(format!(
                "weyl minor X={x} Q={q:.4}: kept {}/{}  max|f| = {:.3}  ratio = {:.6}  [{}]",
                report.kept,
                report.requested,
                report.max_modulus,
                report.ratio,
                fmt_duration(elapsed),
            ));
            out.records.push(
                ResultRecord::new("weyl-minor")
                    .input("X", x)
                    .input("q_cutoff", q)
                    .input("samples", args.samples)
                    .seed(args.seed)
                    .output("kept", report.kept, Method::MonteCarlo)
                    .output("max_modulus", report.max_modulus, Method::MonteCarlo)
                    .output("ratio", report.ratio, Method::MonteCarlo)
                    .output(
                        "argmax",
                        serde_json::json!(report.argmax),
                        Method::MonteCarlo,
                    )
                    .elapsed(elapsed),
            );
        }
        if matches!(args.probe, ProbeKind::Major | ProbeKind::Both) {
            let started = Instant::now();
            let report = major_arc_error_probe(x, args.samples, args.seed);
            let elapsed = started.elapsed();
            out.line(format!(
                "weyl major X={x} L={:.4}: max|f - V| = {:.4}  normalized = {:.6}  [{}]",
                report.l,
                report.max_raw,
                report.max_normalized,
                fmt_duration(elapsed),
            ));
            out.records.push(
                ResultRecord::new("weyl-major")
                    .input("X", x)
                    .input("samples", args.samples)
                    .seed(args.seed)
                    .output("l", report.l, Method::ExactCount)
                    .output("max_raw", report.max_raw, Method::MonteCarlo)
                    .output("max_normalized", report.max_normalized, Method::MonteCarlo)
                    .elapsed(elapsed),
            );
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// density
// ---------------------------------------------------------------------

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Complete-sum series over prime-power moduli.
    Sums,
    /// Normalized solution counting at the top level.
    Counting,
    /// Run both and report their difference.
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct DensityArgs {
    /// The prime p.
    #[arg(long)]
    pub p: u64,
    /// Number of variables per side.
    #[arg(long, default_value_t = 6)]
    pub s: u32,
    /// Offset triple h1,h2,h3.
    #[arg(long, value_parser = parse_offset, required = true)]
    pub h: Offset,
    /// Level: densities are computed through modulus p^H.
    #[arg(long = "H", default_value_t = 2)]
    pub level: u32,
    /// Which computation route to use.
    #[arg(long, value_enum, default_value_t = Route::Both)]
    pub route: Route,
}

pub fn cmd_density(args: &DensityArgs) -> Result<CommandOutput, Error> {
    let budget = Budget::default();
    let mut out = CommandOutput::new();
    out.line(format!(
        "density: p={} s={} h=({},{},{}) H={}",
        args.p, args.s, args.h.h1, args.h.h2, args.h.h3, args.level
    ));
    let mut record = ResultRecord::new("density")
        .input("p", args.p)
        .input("s", args.s)
        .input("h", offset_json(&args.h))
        .input("H", args.level)
        .input(
            "route",
            match args.route {
                Route::Sums => "sums",
                Route::Counting => "counting",
                Route::Both => "both",
            },
        );
    let started = Instant::now();
    let mut via_sums = None;
    let mut via_counting = None;
    if matches!(args.route, Route::Sums | Route::Both) {
        let report = padic_density_via_sums(args.p, args.s, &args.h, args.level, &budget)?;
        out.line(format!(
            "  via sums:     {:.12}  (imag residual {:.2e})",
            report.value, report.imag_residual
        ));
        record = record
            .output("via_sums", report.value, Method::TruncatedSeries)
            .output(
                "via_sums_imag_residual",
                report.imag_residual,
                Method::TruncatedSeries,
            );
        via_sums = Some(report.value);
    }
    if matches!(args.route, Route::Counting | Route::Both) {
        let report = padic_density_via_counting(args.p, args.s, &args.h, args.level, &budget)?;
        out.line(format!("  via counting: {:.12}", report.value));
        record = record.output("via_counting", report.value, Method::ExactCount);
        via_counting = Some(report.value);
    }
    if let (Some(a), Some(b)) = (via_sums, via_counting) {
        out.line(format!("  difference:   {:.3e}", (a - b).abs()));
        record = record.output("route_difference", (a - b).abs(), Method::TruncatedSeries);
    }
    out.records.push(record.elapsed(started.elapsed()));
    Ok(out)
}

// ---------------------------------------------------------------------
// integral
// ---------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct IntegralArgs {
    /// Number of variables per side (absolute convergence needs s >= 4).
    #[arg(long, default_value_t = 6)]
    pub s: u32,
    /// Normalized offset n1,n2,n3.
    #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
    pub n: [f64; 3],
    /// Truncation half-width of the frequency cube.
    #[arg(long = "B", default_value_t = 16.0)]
    pub b: f64,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also run the Monte-Carlo volume oracle and compare.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle window half-width.
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Oracle sample count.
    #[arg(long, default_value_t = 10_000_000)]
    pub samples: u64,
    /// Oracle seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn cmd_integral(args: &IntegralArgs) -> Result<CommandOutput, Error> {
    let mut out = CommandOutput::new();
    let n = NormalizedOffset::new(args.n[0], args.n[1], args.n[2]);
    let started = Instant::now();
    let quad = singular_integral_truncated(args.s, &n, args.b, args.tol)?;
    let elapsed = started.elapsed();
    out.line(format!(
        "integral: s={} n=({},{},{}) B={}",
        args.s, args.n[0], args.n[1], args.n[2], args.b
    ));
    out.line(format!(
        "  quadrature = {:.9}  tail ~ {}  imag residual {:.2e}  converged: {}  [{}]",
        quad.value,
        quad.tail_estimate
            .map_or("n/a".to_string(), |t| format!("{t:.3e}")),
        quad.imag_residual,
        quad.converged,
        fmt_duration(elapsed),
    ));
    out.records.push(
        ResultRecord::new("integral")
            .input("s", args.s)
            .input("n", serde_json::json!(args.n))
            .input("B", args.b)
            .input("tol", args.tol)
            .output("value", quad.value, Method::Quadrature)
            .output(
                "tail_estimate",
                quad.tail_estimate
                    .map_or(serde_json::Value::Null, |t| serde_json::json!(t)),
                Method::Quadrature,
            )
            .output("imag_residual", quad.imag_residual, Method::Quadrature)
            .output("converged", quad.converged, Method::Quadrature)
            .output(
                "inner_evaluations",
                quad.inner_evaluations,
                Method::Quadrature,
            )
            .elapsed(elapsed),
    );
    if args.oracle {
        let started = Instant::now();
        let fine = real_density_oracle(args.s, &n, args.eps, args.samples, args.seed)?;
        let coarse = real_density_oracle(args.s, &n, 2.0 * args.eps, args.samples, args.seed)?;
        let combined = combined_comparison_error(&quad, &fine, &coarse)?;
        let gap = (quad.value - fine.value).abs();
        let elapsed = started.elapsed();
        out.line(format!(
            "  oracle     = {:.9} +- {:.2e}  (eps={}, {} samples, seed {})",
            fine.value, fine.std_error, args.eps, args.samples, args.seed
        ));
        out.line(format!(
            "  window bias indicator = {:.3e}  combined sigma = {:.3e}  gap = {:.3e}  within 3 sigma: {}",
            (fine.value - coarse.value).abs(),
            combined,
            gap,
            gap < 3.0 * combined,
        ));
        out.line(format!("  [{}]", fmt_duration(elapsed)));
        out.records.push(
            ResultRecord::new("integral-oracle")
                .input("s", args.s)
                .input("n", serde_json::json!(args.n))
                .input("eps", args.eps)
                .input("samples", args.samples)
                .seed(args.seed)
                .output("value", fine.value, Method::MonteCarlo)
                .output("std_error", fine.std_error, Method::MonteCarlo)
                .output("hits", fine.hits, Method::MonteCarlo)
                .output("coarse_value", coarse.value, Method::MonteCarlo)
                .output(
                    "window_bias_indicator",
                    (fine.value - coarse.value).abs(),
                    Method::MonteCarlo,
                )
                .output("combined_sigma", combined, Method::MonteCarlo)
                .output("gap_to_quadrature", gap, Method::MonteCarlo)
                .output("within_3_sigma", gap < 3.0 * combined, Method::MonteCarlo)
                .elapsed(elapsed),
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// cache
// ---------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheAction,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CacheAction {
    /// List cached tables and validate their headers.
    Inspect,
    /// Remove all cached tables.
    Clear,
}

/// Parse `table-s{S}-x{X}.vintab` into `(S, X)`.
fn parse_cache_name(name: &str) -> Option<(u32, u64)> {
    let rest = name.strip_prefix("table-s")?.strip_suffix(".vintab")?;
    let (s, x) = rest.split_once("-x")?;
    Some((s.parse().ok()?, x.parse().ok()?))
}

fn cache_files(dir: &Path) -> Vec<(PathBuf, u32, u64)> {
    let mut files = Vec::new();
    if let Ok(entries) = std::fs::read_dir(dir) {
        for entry in entries.flatten() {
            let name = entry.file_name();
            if let Some((s, x)) = name.to_str().and_then(parse_cache_name) {
                files.push((entry.path(), s, x));
            }
        }
    }
    files.sort();
    files
}

pub fn cmd_cache(args: &CacheArgs, cache_dir: Option<&Path>) -> Result<CommandOutput, Error> {
    let dir = cache_dir.ok_or_else(|| {
        Error::Config(
            "no cache directory configured (use --cache-dir, VINOGRADOV_CACHE_DIR, or a config \
             file)"
                .into(),
        )
    })?;
    let mut out = CommandOutput::new();
    let files = cache_files(dir);
    match args.action {
        CacheAction::Inspect => {
            out.line(format!("cache {}: {} table(s)", dir.display(), files.len()));
            for (path, s, x) in &files {
                let bytes = std::fs::metadata(path).map(|m| m.len()).unwrap_or(0);
                let (status, entries, total) = match read_table(path, *s, *x) {
                    Ok(t) => (
                        "ok".to_string(),
                        t.distinct_moments() as u64,
                        t.total.to_string(),
                    ),
                    Err(e) => (format!("corrupt: {e}"), 0, "0".to_string()),
                };
                out.line(format!(
                    "  s={s} X={x}  {} entries, {} bytes  [{status}]",
                    entries, bytes
                ));
                out.records.push(
                    ResultRecord::new("cache-inspect")
                        .input(
                            "file",
                            path.file_name().unwrap_or_default().to_string_lossy(),
                        )
                        .input("s", *s)
                        .input("X", *x)
                        .output("entries", entries, Method::ExactCount)
                        .output("bytes", bytes, Method::ExactCount)
                        .output("total_mass", total, Method::ExactCount)
                        .output("status", status, Method::ExactCount),
                );
            }
        }
        CacheAction::Clear => {
            let mut removed = 0u64;
            let mut freed = 0u64;
            for (path, _, _) in &files {
                freed += std::fs::metadata(path).map(|m| m.len()).unwrap_or(0);
                std::fs::remove_file(path)?;
                removed += 1;
            }
            out.line(format!(
                "cache {}: removed {removed} table(s), {freed} bytes",
                dir.display()
            ));
            out.records.push(
                ResultRecord::new("cache-clear")
                    .input("dir", dir.to_string_lossy())
                    .output("removed", removed, Method::ExactCount)
                    .output("bytes_freed", freed, Method::ExactCount),
            );
        }
    }
    Ok(out)
}
