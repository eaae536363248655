//! Benchmark suites: named worlds run through the full pipeline, one CSV row
//! each.

use std::io;
use std::time::Instant;

use serde::Serialize;

use crate::par;
use crate::pipeline::{default_limits, run_pipeline, Outcome};
use crate::runtime::verify_optimal;
use crate::synth::{size_bound_check, SizeBound};
use crate::world::{double_pass_triangle, generate_random, save, spiral, two_cell, GenerateOptions, Gridworld};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Spiral,
    DoublePass,
    TwoCell,
    Random { n: u32, predicates: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub name: String,
    pub source: Source,
}

impl SuiteEntry {
    pub fn random(name: &str, n: u32, predicates: u32, seed: u64) -> SuiteEntry {
        SuiteEntry { name: name.to_string(), source: Source::Random { n, predicates, seed } }
    }

    pub fn world(&self) -> Gridworld {
        match self.source {
            Source::Spiral => spiral(),
            Source::DoublePass => double_pass_triangle(),
            Source::TwoCell => two_cell(),
            Source::Random { n, predicates, seed } => generate_random(n, predicates, seed, &GenerateOptions::default()),
        }
    }
}

/// Seed of the hand-picked 3x3, 5-predicate world with 11 regions whose
/// shortest branch revisits an edge.
pub const LOOPY_SEED: u64 = 295;

/// Random rows of the default suite: grid side, predicates, and seeds picked
/// so that every row is winnable at offset 0.
pub const SUITE_FAMILIES: [(u32, u32, &[u64]); 6] = [
    (3, 5, &[3]),
    (50, 10, &[3]),
    (50, 20, &[1]),
    (100, 20, &[2, 5]),
    (100, 30, &[1, 5, 6, 7]),
    (100, 50, &[2, 6, 11, 13, 14]),
];

/// The 17 named instances. Random seeds are offset by `base_seed`.
pub fn default_suite(base_seed: u64) -> Vec<SuiteEntry> {
    let mut out = vec![
        SuiteEntry { name: "spiral".into(), source: Source::Spiral },
        SuiteEntry { name: "double_pass_triangle".into(), source: Source::DoublePass },
        SuiteEntry::random("size3preds5loopy", 3, 5, base_seed + LOOPY_SEED),
    ];
    for (n, p, seeds) in SUITE_FAMILIES {
        for (k, seed) in seeds.iter().enumerate() {
            out.push(SuiteEntry::random(&format!("size{n}preds{p}-{}", k + 1), n, p, base_seed + seed));
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
#[error("suite line {line}: {message}")]
pub struct SuiteError {
    pub line: usize,
    pub message: String,
}

/// One entry per line: `<name> spiral|double-pass|two-cell` or
/// `<name> random <n> <predicates> <seed>`. `#` starts a comment.
pub fn parse_suite(text: &str) -> Result<Vec<SuiteEntry>, SuiteError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| SuiteError { line: i + 1, message };
        let words: Vec<&str> = line.split_whitespace().collect();
        let name = words[0].to_string();
        let source = match &words[1..] {
            ["spiral"] => Source::Spiral,
            ["double-pass"] => Source::DoublePass,
            ["two-cell"] => Source::TwoCell,
            ["random", n, p, s] => {
                let n: u32 = n.parse().map_err(|_| err(format!("bad grid size `{n}`")))?;
                let predicates: u32 = p.parse().map_err(|_| err(format!("bad predicate count `{p}`")))?;
                let seed: u64 = s.parse().map_err(|_| err(format!("bad seed `{s}`")))?;
                if n < 2 || predicates < 1 {
                    return Err(err("grid size must be at least 2 and predicates at least 1".into()));
                }
                Source::Random { n, predicates, seed }
            }
            _ => return Err(err(format!("cannot read `{line}`"))),
        };
        out.push(SuiteEntry { name, source });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub name: String,
    pub gridworld_bytes: usize,
    pub policy_bytes: Option<usize>,
    pub policy_instructions: Option<usize>,
    pub regions: usize,
    pub tree_nodes: usize,
    pub branch_moves: Option<usize>,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct BenchResult {
    pub record: BenchRecord,
    pub outcome: Option<Outcome>,
    pub size_bound: Option<SizeBound>,
    pub verified: Option<bool>,
}

pub fn run_entry(entry: &SuiteEntry) -> BenchResult {
    let world = entry.world();
    let start = Instant::now();
    let run = run_pipeline(&world, &default_limits(&world));
    let mut record = BenchRecord {
        name: entry.name.clone(),
        gridworld_bytes: save(&world).len(),
        policy_bytes: None,
        policy_instructions: None,
        regions: world.regions.len(),
        tree_nodes: 0,
        branch_moves: None,
        wall_time_ms: 0.0,
    };
    let mut result = BenchResult { record: record.clone(), outcome: None, size_bound: None, verified: None };
    if let Ok(run) = run {
        record.tree_nodes = run.tree.node_count();
        result.outcome = Some(run.outcome);
        if let (Some(program), Some(branch)) = (&run.program, &run.branch) {
            let size = program.size();
            record.policy_bytes = Some(size.bytes);
            record.policy_instructions = Some(size.instructions);
            record.branch_moves = Some(branch.moves());
            result.size_bound = Some(size_bound_check(program, branch));
            result.verified = Some(verify_optimal(&world, program, branch).ok);
        }
    }
    record.wall_time_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    result.record = record;
    result
}

/// Results in suite order.
pub fn run_suite(entries: &[SuiteEntry], parallel: bool) -> Vec<BenchResult> {
    if parallel {
        par::map(entries, run_entry)
    } else {
        par::map_sequential(entries, run_entry)
    }
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(["name", "gridworld_bytes", "policy_bytes", "policy_instructions", "regions", "tree_nodes", "branch_moves", "wall_time_ms"])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln policy_bytes` against `ln gridworld_bytes`
/// over rows with a policy.
pub fn log_log_slope(records: &[BenchRecord]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.policy_bytes.filter(|&b| b > 0).map(|b| ((r.gridworld_bytes as f64).ln(), (b as f64).ln())))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_shape() {
        let s = default_suite(0);
        assert_eq!(s.len(), 17);
        assert_eq!(s.iter().filter(|e| e.name.starts_with("size100preds50-")).count(), 5);
        let loopy = s.iter().find(|e| e.name == "size3preds5loopy").unwrap();
        assert_eq!(loopy.world().regions.len(), 11);
    }

    #[test]
    fn suite_text() {
        let s = parse_suite("# demo\nsp spiral\nr random 3 5 7 # trailing\n\n").unwrap();
        assert_eq!(s, vec![SuiteEntry { name: "sp".into(), source: Source::Spiral }, SuiteEntry::random("r", 3, 5, 7)]);
        assert_eq!(parse_suite("x random 3 five 1").unwrap_err().line, 1);
        assert!(parse_suite("x random 0 5 1").is_err());
        assert!(parse_suite("").unwrap().is_empty());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,gridworld_bytes,policy_bytes,policy_instructions,regions,tree_nodes,branch_moves,wall_time_ms\n");
        let small = [SuiteEntry { name: "two".into(), source: Source::TwoCell }, SuiteEntry { name: "sp".into(), source: Source::Spiral }];
        let res = run_suite(&small, true);
        let seq = run_suite(&small, false);
        assert_eq!(res[0].record.name, "two");
        assert_eq!(res[1].record.branch_moves, Some(25));
        assert_eq!(res[1].record.tree_nodes, seq[1].record.tree_nodes);
        assert_eq!(res[1].verified, Some(true));
        let mut buf = Vec::new();
        write_csv(&[res[0].record.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("two,"));
    }

    #[test]
    fn slope() {
        let row = |g: usize, p: usize| BenchRecord {
            name: String::new(),
            gridworld_bytes: g,
            policy_bytes: Some(p),
            policy_instructions: Some(1),
            regions: 1,
            tree_nodes: 1,
            branch_moves: Some(1),
            wall_time_ms: 0.0,
        };
        let s = log_log_slope(&[row(10, 100), row(100, 10_000)]).unwrap();
        assert!((s - 2.0).abs() < 1e-9);
        assert_eq!(log_log_slope(&[row(10, 10)]), None);
    }
}
