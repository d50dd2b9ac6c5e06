//! Command-line interface: classify secant varieties of Segre-Veronese
//! varieties, cross-check closed forms against brute force, and verify the
//! cumulant identities.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 a cross-check disagreed,
//! 3 a computation budget was exceeded.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use toricsec::classify::{cross_check, cross_check_on, ClassifyError};
use toricsec::cumulants::{
    sv_complex, toric_binomials, verify_rank_one_vanishing, verify_reparametrization,
    verify_secant_identity, CumulantError, LabeledComplex,
};
use toricsec::normality::{check_lattice_saturation, check_normality, NormalityError};
use toricsec::polytope::PolytopeError;
use toricsec::segre_veronese::{cross_check_facets, cross_check_facets_on, SVParams};
use toricsec::singular::{
    describe_component, expected_component_count, singular_components, SingularError,
};

#[derive(Parser)]
#[command(name = "toricsec", version, about = "Secant varieties of Segre-Veronese varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Instance {
    /// degrees a_1,...,a_k (comma separated)
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<i64>,
    /// projective dimensions b_1,...,b_k (comma separated)
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<i64>,
}

#[derive(Args)]
struct Common {
    /// emit machine-readable JSON instead of text
    #[arg(long)]
    json: bool,
    /// refuse instances whose polytope has more lattice points than this
    #[arg(long, default_value_t = 200_000)]
    max_points: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Smooth / Gorenstein / Q-Gorenstein classification, cross-checked
    Classify {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Facet structure of P(a,b), cross-checked against the closed form
    Facets {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Components of the singular locus, with descriptions
    Singular {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Normality of P(a,b) up to a dilation bound, plus lattice saturation
    Normality {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
        /// check dilations 2..=smax
        #[arg(long, default_value_t = 3)]
        smax: i64,
    },
    /// Cross-check every canonical instance within the given bounds
    Scan {
        /// maximum number of factors
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        /// maximum degree a_i
        #[arg(long, default_value_t = 3)]
        max_a: i64,
        /// maximum projective dimension b_i
        #[arg(long, default_value_t = 3)]
        max_b: i64,
        #[command(flatten)]
        common: Common,
        /// worker threads (0 = rayon default)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// only report instances whose tag matches, e.g. "G5" or "G*"
        #[arg(long)]
        only_tags: Option<String>,
    },
    /// Verify the secant cumulant identities on a simplicial complex
    Cumulants {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long)]
        json: bool,
    },
    /// Toric binomial relations between embedding coordinates
    Binomials {
        #[command(flatten)]
        source: ComplexSource,
        /// per-side total degree bound
        #[arg(long, default_value_t = 4)]
        degree_bound: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true)]
struct ComplexSource {
    /// degrees a_1,...,a_k: use the Segre-Veronese complex
    #[arg(long, value_delimiter = ',', requires = "b")]
    a: Option<Vec<i64>>,
    /// projective dimensions b_1,...,b_k
    #[arg(long, value_delimiter = ',', requires = "a")]
    b: Option<Vec<i64>>,
    /// read generators from a file instead (one "name: label label ..." per line)
    #[arg(long, conflicts_with_all = ["a", "b"])]
    complex: Option<String>,
    /// vertex cap for the Segre-Veronese complex
    #[arg(long, default_value_t = 12)]
    max_vertices: usize,
}

enum CliError {
    Usage(String),
    Disagree,
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Disagree => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::BudgetExceeded { .. } | PolytopeError::TooManyFacets(_) => {
                CliError::Budget(e.to_string())
            }
            PolytopeError::Empty => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Polytope(p) => p.into(),
        }
    }
}

impl From<SingularError> for CliError {
    fn from(e: SingularError) -> Self {
        match e {
            SingularError::Polytope(p) => p.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<NormalityError> for CliError {
    fn from(e: NormalityError) -> Self {
        match e {
            NormalityError::Polytope(p) => p.into(),
        }
    }
}

impl From<CumulantError> for CliError {
    fn from(e: CumulantError) -> Self {
        match e {
            CumulantError::TooManyVertices(..) | CumulantError::BinomialBudget(_) => {
                CliError::Budget(e.to_string())
            }
            CumulantError::InvalidComplex(_) => CliError::Usage(e.to_string()),
        }
    }
}

fn params(inst: &Instance, common: &Common) -> Result<SVParams, CliError> {
    let p = SVParams::new(inst.a.clone(), inst.b.clone())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if p.point_count() > common.max_points {
        return Err(CliError::Budget(format!(
            "instance has {} lattice points, over --max-points {}",
            p.point_count(),
            common.max_points
        )));
    }
    Ok(p)
}

fn budget(common: &Common) -> u128 {
    // generous cell budget; the point cap above is the effective guard
    toricsec::polytope::DEFAULT_ENUM_BUDGET
        .max(common.max_points.saturating_mul(64))
}

fn cmd_classify(inst: &Instance, common: &Common) -> Result<(), CliError> {
    let p = params(inst, common)?;
    let c = cross_check(&p, budget(common))?;
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "a": p.a, "b": p.b, "classification": c,
            }))
            .unwrap()
        );
    } else {
        println!("instance a={:?} b={:?}", p.a, p.b);
        println!("  closed-form tag: {:?} ({:?})", c.tag, c.tag.class());
        println!("  computed class:  {:?}", c.computed.class());
        if let Some(beta) = &c.computed.integral_beta {
            let s: Vec<String> = beta.iter().map(|x| x.to_string()).collect();
            println!("  integral beta:   ({})", s.join(", "));
        } else if let Some(beta) = &c.computed.rational_beta {
            let s: Vec<String> = beta.iter().map(|x| x.to_string()).collect();
            println!("  rational beta:   ({})", s.join(", "));
        }
        println!("  agreement:       {}", if c.agree { "yes" } else { "NO" });
    }
    if c.agree {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn cmd_facets(inst: &Instance, common: &Common) -> Result<(), CliError> {
    let p = params(inst, common)?;
    let f = cross_check_facets(&p, budget(common))?;
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "a": p.a, "b": p.b, "facet_check": f,
            }))
            .unwrap()
        );
    } else {
        println!("instance a={:?} b={:?}", p.a, p.b);
        println!("  dim P = {} ({:?})", f.computed_dim, f.expected.dim_case);
        println!("  lattice points: {}", f.computed_points);
        let labels: Vec<String> = f.computed_facets.iter().map(|l| l.display()).collect();
        println!("  facets ({}): {}", labels.len(), labels.join(", "));
        for (i, j, tag) in &f.expected.missing_z {
            println!("  Z_{{{},{}}} is not a facet ({:?})", i, j, tag);
        }
        println!("  agreement with closed form: {}", if f.agree { "yes" } else { "NO" });
    }
    if f.agree {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn cmd_singular(inst: &Instance, common: &Common) -> Result<(), CliError> {
    let p = params(inst, common)?;
    let poly = p.build_polytope(budget(common))?;
    let comps = singular_components(&poly, &p)?;
    let expected = expected_component_count(&p);
    let agree = comps.len() as u64 == expected;
    let mut descriptions = Vec::new();
    for c in &comps {
        descriptions.push(describe_component(&p, c)?);
    }
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "a": p.a, "b": p.b,
                "components": comps,
                "descriptions": descriptions,
                "expected_count": expected,
                "agree": agree,
            }))
            .unwrap()
        );
    } else {
        println!("instance a={:?} b={:?}", p.a, p.b);
        println!("  singular-locus components: {} (closed form: {})", comps.len(), expected);
        for (c, d) in comps.iter().zip(&descriptions) {
            println!("  {:?}: {}", c.kind, d);
        }
        println!("  agreement: {}", if agree { "yes" } else { "NO" });
    }
    if agree {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn cmd_normality(inst: &Instance, common: &Common, smax: i64) -> Result<(), CliError> {
    let p = params(inst, common)?;
    let poly = p.build_polytope(budget(common))?;
    let r = check_normality(&poly, smax, budget(common))?;
    let s = check_lattice_saturation(&poly)?;
    let ok = r.failure.is_none() && s.saturated;
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "a": p.a, "b": p.b, "normality": r, "saturation": s, "ok": ok,
            }))
            .unwrap()
        );
    } else {
        println!("instance a={:?} b={:?}", p.a, p.b);
        match &r.failure {
            None => println!("  normal up to dilation s = {}", r.normal_up_to),
            Some((s, w)) => println!("  NOT normal at s = {}: witness {:?}", s, w),
        }
        println!("  lifted-point lattice: rank {}, saturated: {}", s.rank, s.saturated);
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn canonical_instances(max_k: usize, max_a: i64, max_b: i64) -> Vec<SVParams> {
    let mut pairs = Vec::new();
    for a in 1..=max_a {
        for b in 1..=max_b {
            pairs.push((a, b));
        }
    }
    let mut out = Vec::new();
    for k in 1..=max_k {
        let mut idx = vec![0usize; k];
        loop {
            let a: Vec<i64> = idx.iter().map(|&i| pairs[i].0).collect();
            let b: Vec<i64> = idx.iter().map(|&i| pairs[i].1).collect();
            out.push(SVParams::new(a, b).unwrap());
            // next nondecreasing index tuple
            let mut j = k;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                if idx[j] + 1 < pairs.len() {
                    idx[j] += 1;
                    for l in j + 1..k {
                        idx[l] = idx[j];
                    }
                    break;
                }
                if j == 0 {
                    idx.clear();
                    break;
                }
            }
            if idx.is_empty() {
                break;
            }
        }
    }
    out
}

fn tag_matches(tag: &str, pattern: &str) -> bool {
    match pattern.strip_suffix('*') {
        Some(prefix) => tag.starts_with(prefix),
        None => tag == pattern,
    }
}

fn cmd_scan(
    max_k: usize,
    max_a: i64,
    max_b: i64,
    common: &Common,
    jobs: usize,
    only_tags: Option<&str>,
) -> Result<(), CliError> {
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let instances: Vec<SVParams> = canonical_instances(max_k, max_a, max_b)
        .into_iter()
        .filter(|p| p.point_count() <= common.max_points)
        .collect();
    let budget = budget(common);
    let results: Vec<Result<Option<(SVParams, bool, String)>, CliError>> = instances
        .par_iter()
        .map(|p| {
            let poly = p.build_polytope(budget)?;
            let f = cross_check_facets_on(p, &poly);
            let c = cross_check_on(p, &poly)?;
            if let Some(pat) = only_tags {
                if !tag_matches(&format!("{:?}", c.tag), pat) {
                    return Ok(None);
                }
            }
            let comps = singular_components(&poly, p)?;
            let sing_ok = comps.len() as u64 == expected_component_count(p);
            let ok = f.agree && c.agree && sing_ok;
            let line = format!(
                "a={:?} b={:?} dim={} points={} facets={} class={:?} computed={:?} components={} {}",
                p.a,
                p.b,
                f.computed_dim,
                f.computed_points,
                if f.agree { "ok" } else { "MISMATCH" },
                c.tag,
                c.computed.class(),
                comps.len(),
                if ok { "ok" } else { "MISMATCH" },
            );
            Ok(Some((p.clone(), ok, line)))
        })
        .collect();
    let mut all_ok = true;
    let mut checked = 0usize;
    let mut rows = Vec::new();
    for r in results {
        let Some((p, ok, line)) = r? else { continue };
        all_ok &= ok;
        checked += 1;
        if common.json {
            rows.push(json!({"a": p.a, "b": p.b, "ok": ok, "line": line}));
        } else {
            println!("{}", line);
        }
    }
    if common.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "checked": checked, "all_ok": all_ok, "instances": rows,
            }))
            .unwrap()
        );
    } else {
        println!("checked {} instances: {}", checked, if all_ok { "all ok" } else { "MISMATCH" });
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

/// Parse a complex file: one generator per line, "name: label label ..." or
/// just "label label ...". Vertices are inferred: each label gets as many
/// copies as its largest multiplicity in any generator.
fn parse_complex_file(path: &str) -> Result<LabeledComplex, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path, e)))?;
    let mut label_order: Vec<String> = Vec::new();
    let mut gens_by_label: Vec<Vec<String>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let body = match line.split_once(':') {
            Some((_, rest)) => rest,
            None => line,
        };
        let labels: Vec<String> = body.split_whitespace().map(|s| s.to_string()).collect();
        if labels.is_empty() {
            continue;
        }
        for l in &labels {
            if !label_order.contains(l) {
                label_order.push(l.clone());
            }
        }
        gens_by_label.push(labels);
    }
    if gens_by_label.is_empty() {
        return Err(CliError::Usage(format!("{}: no generators found", path)));
    }
    // copies of each label = max multiplicity over generators
    let mut copies: BTreeMap<String, usize> = BTreeMap::new();
    for g in &gens_by_label {
        let mut count: BTreeMap<&String, usize> = BTreeMap::new();
        for l in g {
            *count.entry(l).or_insert(0) += 1;
        }
        for (l, c) in count {
            let e = copies.entry(l.clone()).or_insert(0);
            *e = (*e).max(c);
        }
    }
    let mut vertex_labels: Vec<usize> = Vec::new();
    let mut first_vertex: Vec<usize> = Vec::new();
    for (li, l) in label_order.iter().enumerate() {
        first_vertex.push(vertex_labels.len());
        for _ in 0..copies[l] {
            vertex_labels.push(li);
        }
    }
    let generators: Vec<Vec<usize>> = gens_by_label
        .iter()
        .map(|g| {
            let mut used: BTreeMap<&String, usize> = BTreeMap::new();
            g.iter()
                .map(|l| {
                    let li = label_order.iter().position(|x| x == l).unwrap();
                    let off = used.entry(l).or_insert(0);
                    let v = first_vertex[li] + *off;
                    *off += 1;
                    v
                })
                .collect()
        })
        .collect();
    LabeledComplex::from_generators(label_order, vertex_labels, &generators)
        .map_err(CliError::from)
}

fn load_complex(source: &ComplexSource) -> Result<LabeledComplex, CliError> {
    match (&source.a, &source.b, &source.complex) {
        (Some(a), Some(b), None) => {
            let p = SVParams::new(a.clone(), b.clone())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            sv_complex(&p, source.max_vertices).map_err(CliError::from)
        }
        (None, None, Some(path)) => parse_complex_file(path),
        _ => Err(CliError::Usage("give either --a/--b or --complex".into())),
    }
}

fn cmd_cumulants(source: &ComplexSource, json_out: bool) -> Result<(), CliError> {
    let cx = load_complex(source)?;
    let secant = verify_secant_identity(&cx);
    let reparam = verify_reparametrization(&cx);
    let rank_one = verify_rank_one_vanishing(&cx);
    let ok = secant.all_match && reparam.all_match && rank_one;
    if json_out {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "simplices": cx.simplices.len(),
                "connected": cx.is_connected(),
                "secant_identity": secant,
                "reparametrization": reparam,
                "rank_one_vanishing": rank_one,
                "ok": ok,
            }))
            .unwrap()
        );
    } else {
        println!("complex: {} simplices, connected: {}", cx.simplices.len(), cx.is_connected());
        println!("  secant identity:       {}", if secant.all_match { "verified" } else { "FAILED" });
        for m in &secant.mismatches {
            println!("    mismatch: {}", m);
        }
        println!("  reparametrization:     {}", if reparam.all_match { "verified" } else { "FAILED" });
        println!("  rank-one z-vanishing:  {}", if rank_one { "verified" } else { "FAILED" });
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Disagree)
    }
}

fn cmd_binomials(source: &ComplexSource, degree_bound: u32, json_out: bool) -> Result<(), CliError> {
    let cx = load_complex(source)?;
    let bins = toric_binomials(&cx, degree_bound)?;
    if json_out {
        let rendered: Vec<String> = bins.iter().map(|b| b.render(&cx)).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "degree_bound": degree_bound,
                "count": bins.len(),
                "binomials": rendered,
            }))
            .unwrap()
        );
    } else {
        println!("{} binomial relations up to degree {}:", bins.len(), degree_bound);
        for b in &bins {
            println!("  {}", b.render(&cx));
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify { inst, common } => cmd_classify(inst, common),
        Command::Facets { inst, common } => cmd_facets(inst, common),
        Command::Singular { inst, common } => cmd_singular(inst, common),
        Command::Normality { inst, common, smax } => cmd_normality(inst, common, *smax),
        Command::Scan { max_k, max_a, max_b, common, jobs, only_tags } => {
            cmd_scan(*max_k, *max_a, *max_b, common, *jobs, only_tags.as_deref())
        }
        Command::Cumulants { source, json } => cmd_cumulants(source, *json),
        Command::Binomials { source, degree_bound, json } => {
            cmd_binomials(source, *degree_bound, *json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version requests are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {}", msg),
                CliError::Disagree => eprintln!("error: cross-check disagreement"),
                CliError::Budget(msg) => eprintln!("error: {}", msg),
            }
            ExitCode::from(e.code())
        }
    }
}
