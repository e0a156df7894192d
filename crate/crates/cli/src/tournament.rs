use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use rayon::prelude::*;
use serde::Serialize;

use selgame_core::game::{value_gaps, Certificate};
use selgame_core::scenario::Scenario;

use crate::{load_scenario, write_out, Failure, Overrides};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Row {
    pub scenario: String,
    pub seed: String,
    pub certificate: String,
    pub rounds: String,
    pub max_gap: String,
    pub final_radius: String,
}

impl Row {
    fn failed(scenario: String, seed: String, err: impl std::fmt::Display) -> Self {
        eprintln!("{scenario} seed {seed}: {err}");
        Row { scenario, seed, certificate: "error".into(), rounds: String::new(), max_gap: String::new(), final_radius: String::new() }
    }
}

fn play_row(s: &Scenario) -> Row {
    let (t, cert) = match s.run() {
        Ok(v) => v,
        Err(e) => return Row::failed(s.name.clone(), s.seed.to_string(), e),
    };
    let max_gap = value_gaps(&t.f, &t.points()).into_iter().max();
    let final_radius = match &cert {
        Certificate::Convergence { facts } => facts.last().map(|f| f.radius.to_string()),
        _ => None,
    };
    Row {
        scenario: s.name.clone(),
        seed: s.seed.to_string(),
        certificate: cert.kind().to_string(),
        rounds: t.responses().len().saturating_sub(1).to_string(),
        max_gap: max_gap.map(|g| g.to_string()).unwrap_or_default(),
        final_radius: final_radius.unwrap_or_default(),
    }
}

/// Plays every (scenario, seed) job and returns the rows sorted by scenario then seed.
pub fn rows(paths: &[PathBuf], repetitions: u64, parallelism: usize, overrides: &Overrides) -> anyhow::Result<Vec<Row>> {
    let mut jobs = Vec::new();
    let mut out = Vec::new();
    for p in paths {
        let name = p.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match load_scenario(&p.to_string_lossy()) {
            Ok(mut s) => {
                overrides.apply(&mut s);
                if let Err(e) = s.prepare() {
                    out.push(Row::failed(s.name.clone(), s.seed.to_string(), e));
                    continue;
                }
                for r in 0..repetitions {
                    let mut job = s.clone();
                    job.seed = s.seed.wrapping_add(r);
                    jobs.push(job);
                }
            }
            Err(f) => out.push(Row::failed(name, String::new(), f.err)),
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(parallelism.max(1)).build()?;
    out.extend(pool.install(|| jobs.par_iter().map(play_row).collect::<Vec<_>>()));
    out.sort_by(|a, b| {
        let seed = |r: &Row| r.seed.parse::<u64>().ok();
        (&a.scenario, seed(a)).cmp(&(&b.scenario, seed(b))).then_with(|| a.cmp(b))
    });
    Ok(out)
}

pub fn to_csv(rows: &[Row]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["scenario", "seed", "certificate", "rounds", "max_gap", "final_radius"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!(e.to_string()))?)?)
}

pub fn run(pattern: &str, repetitions: u64, parallelism: usize, overrides: &Overrides, out: Option<&Path>) -> Result<u8, Failure> {
    let paths = glob::glob(pattern)
        .with_context(|| format!("bad glob `{pattern}`"))
        .map_err(Failure::config)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::config)?;
    let rows = rows(&paths, repetitions, parallelism, overrides)?;
    write_out(out, &to_csv(&rows)?)?;
    Ok(0)
}
