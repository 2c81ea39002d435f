//! `ftdesign`: builds and verifies the catalog of flag-transitive designs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ftdesign::atlas::{affine_closure, atlas_by_spec};
use ftdesign::autsearch::linear_blockset_stabilizer;
use ftdesign::catalog::{design_checks, run_catalog, v6_search_group, CatalogConfig, EntryStatus, Report};
use ftdesign::design::{base_block_search, Design, DesignJson};
use ftdesign::suzuki::{
    classify_family, family4_search, family_design, normalized_tuples, Family, SuzukiContext, SuzukiTuple,
};
use ftdesign::{par, Error};

#[derive(Parser)]
#[command(name = "ftdesign", version, about = "Flag-transitive 2-(k^2, k, lambda) designs of affine type")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Also write the machine-readable result here.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Include the large entries (Sz(32)).
    #[arg(long, global = true)]
    large: bool,
    /// Run every loop sequentially.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Catalog runs.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Suzuki-group families on V4(q).
    Suzuki {
        #[command(subcommand)]
        cmd: SuzukiCmd,
    },
    /// Designs on V6(2).
    #[command(name = "table1")]
    V6 {
        #[command(subcommand)]
        cmd: V6Cmd,
    },
    /// Verifies a design file against a group.
    Verify {
        #[arg(long)]
        design: PathBuf,
        /// `atlas:NAME` or `atlas:NAME:k=v,...`; omitted for files with blocks.
        #[arg(long)]
        group: Option<String>,
    },
    /// Linear stabilizer of the blocks through 0 of a design file.
    Autgroup {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    Run {
        /// Entry ids; a trailing `*` selects by prefix.
        #[arg(long = "entry")]
        entries: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lists the entry ids.
    List,
}

#[derive(Subcommand)]
enum SuzukiCmd {
    /// One seed per family with its verified design.
    Families {
        #[arg(long, default_value_t = 8)]
        q: u32,
    },
    /// All normalized Family 4 seeds.
    Family4Search {
        #[arg(long, default_value_t = 8)]
        q: u32,
        /// Number of witnesses whose design is built and verified.
        #[arg(long, default_value_t = 1)]
        verify: usize,
    },
}

#[derive(Subcommand)]
enum V6Cmd {
    Search {
        #[arg(long)]
        lambda: u64,
        /// Overrides the default group for this λ.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failure of the inputs rather than of a verification.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.sequential {
        par::set_sequential(true);
    } else if cli.global.threads > 0 && !par::init_threads(cli.global.threads) {
        eprintln!("warning: thread pool already initialised");
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage_like = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<Error>(),
                    Some(Error::UnknownEntry(_) | Error::UnsupportedParams { .. } | Error::Parse(_) | Error::InvalidTuple(_))
                );
            ExitCode::from(if usage_like { 2 } else { 1 })
        }
    }
}

fn write_json(path: &Option<PathBuf>, value: &impl Serialize) -> Result<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value)?;
        fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Catalog { cmd: CatalogCmd::List } => {
            for e in ftdesign::catalog::default_catalog() {
                let tag = if e.large { " (large)" } else { "" };
                println!("{}{tag}  {}", e.id, e.recipe.describe());
            }
            Ok(true)
        }
        Cmd::Catalog { cmd: CatalogCmd::Run { entries, seed } } => {
            let config = CatalogConfig { entries: entries.clone(), large: g.large, seed: *seed };
            let report = run_catalog(&config)?;
            print_report(&report);
            write_json(&g.json, &report)?;
            Ok(report.all_pass())
        }
        Cmd::Suzuki { cmd: SuzukiCmd::Families { q } } => suzuki_families(*q, &g.json),
        Cmd::Suzuki { cmd: SuzukiCmd::Family4Search { q, verify } } => family4(*q, *verify, &g.json),
        Cmd::V6 { cmd: V6Cmd::Search { lambda, group, seed } } => v6_search(*lambda, group.as_deref(), *seed, &g.json),
        Cmd::Verify { design, group } => verify(design, group.as_deref(), &g.json),
        Cmd::Autgroup { design, seed } => autgroup(design, *seed, &g.json),
    }
}

fn print_report(report: &Report) {
    for e in &report.entries {
        let status = match e.status {
            EntryStatus::Pass => "PASS",
            EntryStatus::Fail => "FAIL",
            EntryStatus::Error => "ERROR",
        };
        let params = match &e.measured {
            Some(m) => match m.lambda {
                Some(l) => format!("2-({},{},{}) r={} b={}", m.v, m.k, l, m.r, m.b),
                None => format!("({},{},-) r={} b={}", m.v, m.k, m.r, m.b),
            },
            None => "-".into(),
        };
        println!("{status:<5} {:<24} {params}", e.id);
        for c in e.failed_checks() {
            println!("      {}: {}", c.name, c.detail);
        }
        if let Some(err) = &e.error {
            println!("      error: {err}");
        }
    }
    let s = report.summary;
    println!("{} entries: {} pass, {} fail, {} error", s.total, s.pass, s.fail, s.error);
}

fn suzuki_families(q: u32, json_out: &Option<PathBuf>) -> Result<bool> {
    let ctx = SuzukiContext::new(q)?;
    let f = &ctx.field;
    let mut seeds = vec![SuzukiTuple::new(1, 0, 1, 0), SuzukiTuple::new(1, 1, 1, 1)];
    let tuples = normalized_tuples(q);
    let mut family3 = None;
    for t in &tuples {
        if classify_family(f, t)? == Family::Family3 {
            family3 = Some(*t);
            break;
        }
    }
    seeds.extend(family3);
    seeds.extend(family4_search(f)?.into_iter().next());
    println!("ovoid {} vectors, spread {} components", ctx.ovoid.len(), ctx.spread.len());
    let mut ok = true;
    let mut out = Vec::new();
    for t in seeds {
        let fd = family_design(&ctx, &t)?;
        let w = fd.witness(q);
        let expected = fd.family.expected_lambda(q as u64);
        let good = expected.is_some() && fd.lambda == expected;
        ok &= good;
        println!(
            "{} {:?} {:?} |B∩O|={} r={} λ={} expected {}",
            if good { "PASS" } else { "FAIL" },
            t,
            fd.family,
            fd.ovoid_meet,
            fd.design.r(),
            fd.lambda.map_or("-".into(), |l| l.to_string()),
            expected.map_or("-".into(), |l| l.to_string())
        );
        out.push(w);
    }
    write_json(json_out, &out)?;
    Ok(ok)
}

fn family4(q: u32, verify: usize, json_out: &Option<PathBuf>) -> Result<bool> {
    let ctx = SuzukiContext::new(q)?;
    let hits = family4_search(&ctx.field)?;
    let mut out = Vec::new();
    let mut ok = !hits.is_empty();
    for (i, t) in hits.iter().enumerate() {
        let w = if i < verify {
            let fd = family_design(&ctx, t)?;
            ok &= fd.lambda == Some(q as u64 * q as u64);
            fd.witness(q)
        } else {
            ftdesign::suzuki::Witness { q, x0: t.x0, y0: t.y0, z0: t.z0, t0: t.t0, family: Family::Family4, lambda: None }
        };
        println!("{}", serde_json::to_string(&w)?);
        out.push(w);
    }
    eprintln!("{} Family 4 witnesses", hits.len());
    write_json(json_out, &out)?;
    Ok(ok)
}

fn v6_search(lambda: u64, group: Option<&str>, seed: u64, json_out: &Option<PathBuf>) -> Result<bool> {
    if !matches!(lambda, 1 | 2 | 4 | 8) {
        return Err(usage(format!("λ must divide 8, got {lambda}")));
    }
    let spec = group.map(|s| s.strip_prefix("atlas:").unwrap_or(s)).unwrap_or(v6_search_group(lambda));
    let g0 = atlas_by_spec(spec)?.group.over_prime_field()?;
    let hits = base_block_search(&g0, 8, lambda)?;
    let mut out = Vec::new();
    for (i, h) in hits.iter().enumerate() {
        let stab = linear_blockset_stabilizer(&h.design.space, &h.design.through_zero_vec(), Some(seed))?;
        println!("hit {i}: base block {:?} r={} λ={} stabilizer order {}", h.base_block, h.design.r(), h.lambda, stab.order);
        out.push(json!({
            "design": h.design.to_json(Some(h.lambda), true),
            "source": h.source,
            "stabilizer_order": stab.order,
        }));
    }
    println!("{} designs under {}", hits.len(), g0.name);
    write_json(json_out, &out)?;
    Ok(!hits.is_empty())
}

fn read_design(path: &Path) -> Result<DesignJson> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("parsing {}: {e}", path.display())))
}

fn verify(path: &Path, group: Option<&str>, json_out: &Option<PathBuf>) -> Result<bool> {
    let dj = read_design(path)?;
    let g = match group {
        Some(spec) => {
            let name = spec.strip_prefix("atlas:").ok_or_else(|| usage("--group must start with atlas:"))?;
            let g0 = atlas_by_spec(name)?.group.over_prime_field()?;
            Some(affine_closure(&g0)?)
        }
        None => None,
    };
    let Some(g) = g else {
        return Err(usage("verification needs --group atlas:NAME"));
    };
    if g.space.size() != dj.params.v as u32 || g.space.p() != dj.p {
        return Err(usage(format!("{} does not act on the design's {} points", g.name, dj.params.v)));
    }
    let d = Design::from_json(&dj, Some(&g))?;
    let dc = design_checks(&d, &g, false);
    let mut ok = true;
    for c in &dc.checks {
        ok &= c.pass;
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(want) = dj.params.lambda {
        let good = dc.lambda == Some(want);
        ok &= good;
        println!("{} declared-lambda: file {want}, measured {:?}", if good { "PASS" } else { "FAIL" }, dc.lambda);
    }
    write_json(json_out, &json!({ "lambda": dc.lambda, "checks": dc.checks, "pass": ok }))?;
    Ok(ok)
}

fn autgroup(path: &Path, seed: u64, json_out: &Option<PathBuf>) -> Result<bool> {
    let dj = read_design(path)?;
    let blocks = dj
        .blocks_through_zero
        .as_ref()
        .ok_or_else(|| usage("design file has no blocks_through_zero"))?;
    let space = ftdesign::Space::prime(dj.p, dj.dim)?;
    let blocks: Vec<Box<[u32]>> = blocks.iter().map(|b| b.clone().into_boxed_slice()).collect();
    let r = linear_blockset_stabilizer(&space, &blocks, Some(seed))?;
    println!("order {}", r.order);
    let gens: Vec<String> = r.generators.iter().map(|m| m.to_fixture(dj.p)).collect();
    for g in &gens {
        println!("{g}");
    }
    write_json(json_out, &json!({ "order": r.order, "generators": gens, "nodes": r.stats.nodes, "prunes": r.stats.prunes }))?;
    Ok(true)
}
