//! Benchmark sweeps: build an instance grid, run the selected construction
//! on every cell, and emit one CSV row per cell with the achieved size, the
//! bound-formula value, and their ratio.

use serde::{Deserialize, Serialize};

use crate::clustering::BoundParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, PairSet};
use crate::instances;
use crate::preserver::{self, PreserverParams};
use crate::spanner::{self, StandardParams};
use crate::verify;

pub const DEFAULT_CAP: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Layered,
    Random,
    Grid,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "layered" => Ok(Family::Layered),
            "random" => Ok(Family::Random),
            "grid" => Ok(Family::Grid),
            other => Err(Error::invalid(format!("unknown family {other:?}"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::Layered => "layered",
            Family::Random => "random",
            Family::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    NaivePreserver,
    NewPreserver,
    SubsetSpanner,
    StandardSpanner,
}

impl Algo {
    pub fn parse(s: &str) -> Result<Algo> {
        match s {
            "naive" => Ok(Algo::NaivePreserver),
            "new" => Ok(Algo::NewPreserver),
            "subset" => Ok(Algo::SubsetSpanner),
            "standard" => Ok(Algo::StandardSpanner),
            other => Err(Error::invalid(format!("unknown algorithm {other:?}"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Algo::NaivePreserver => "naive",
            Algo::NewPreserver => "new",
            Algo::SubsetSpanner => "subset",
            Algo::StandardSpanner => "standard",
        }
    }

    fn is_preserver(self) -> bool {
        matches!(self, Algo::NaivePreserver | Algo::NewPreserver)
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub algo: Algo,
    /// q for layered cells, n for random cells, side length for grid cells.
    pub sizes: Vec<usize>,
    /// Demand-set sizes; preserver sweeps only. Layered cells ignore this
    /// and use all q^2 first-by-last pairs.
    pub pair_counts: Vec<usize>,
    /// Error exponents; spanner sweeps only.
    pub ds: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub seed: u64,
    pub cap: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::invalid("size grid is empty"));
        }
        let inner_empty = if self.algo.is_preserver() {
            self.family != Family::Layered && self.pair_counts.is_empty()
        } else {
            self.ds.is_empty()
        };
        if inner_empty {
            return Err(Error::invalid("parameter grid is empty"));
        }
        for &s in &self.sizes {
            let n = match self.family {
                Family::Layered => s * s,
                Family::Random => s,
                Family::Grid => s * s,
            };
            if n > self.cap {
                return Err(Error::invalid(format!(
                    "cell size n = {n} exceeds the cap {}; raise --cap to allow it",
                    self.cap
                )));
            }
        }
        if 2.0 * self.b + self.a - 1.0 <= 0.0 {
            return Err(Error::invalid("need 2b + a - 1 > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub p_count: usize,
    pub d: f64,
    pub seed: u64,
    pub h_size: usize,
    pub max_error: u32,
    pub bound: f64,
    pub ratio: f64,
}

fn build_graph(spec: &SweepSpec, size: usize, seed: u64) -> Result<Graph> {
    match spec.family {
        Family::Layered => {
            let inst = instances::layered_graph(size as u32, size as u32)?;
            Ok(inst.graph)
        }
        Family::Random => {
            let m = (3 * size).min(size * size.saturating_sub(1) / 2);
            instances::random_graph(size, m, seed)
        }
        Family::Grid => instances::grid_graph(size, size),
    }
}

fn preserver_cell(
    spec: &SweepSpec,
    size: usize,
    p_count: usize,
    seed: u64,
) -> Result<SweepRow> {
    let (g, pairs, h_size) = if spec.family == Family::Layered {
        let inst = instances::layered_graph(size as u32, size as u32)?;
        let pres = match spec.algo {
            Algo::NaivePreserver => {
                preserver::scheme_preserver(&inst.graph, &inst.pairs, &inst.scheme_paths)?
            }
            _ => preserver::new_preserver(&inst.graph, &inst.pairs, &PreserverParams::default())?,
        };
        let size = pres.edges.len();
        let rep = verify::verify(&inst.graph, &pres.edges, &inst.pairs, 0.0)?;
        if !rep.passed() {
            return Err(Error::internal("preserver failed budget-0 verification"));
        }
        (inst.graph, inst.pairs, size)
    } else {
        let g = build_graph(spec, size, seed)?;
        let pairs = instances::random_pairs(&g, p_count, seed ^ 0x9e37)?;
        let pres = match spec.algo {
            Algo::NaivePreserver => preserver::naive_preserver(&g, &pairs)?,
            _ => preserver::new_preserver(&g, &pairs, &PreserverParams::default())?,
        };
        let size = pres.edges.len();
        let rep = verify::verify(&g, &pres.edges, &pairs, 0.0)?;
        if !rep.passed() {
            return Err(Error::internal("preserver failed budget-0 verification"));
        }
        (g, pairs, size)
    };
    let bound = preserver::preserver_size_bound(g.n(), pairs.len(), spec.a, spec.b, 1.0);
    Ok(SweepRow {
        family: spec.family.name().into(),
        algo: spec.algo.name().into(),
        n: g.n(),
        m: g.m(),
        p_count: pairs.len(),
        d: 0.0,
        seed,
        h_size,
        max_error: 0,
        bound,
        ratio: h_size as f64 / bound,
    })
}

fn all_pairs(n: usize) -> Result<PairSet> {
    let mut raw = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            raw.push((u, v));
        }
    }
    PairSet::new(&raw, n)
}

fn spanner_cell(spec: &SweepSpec, size: usize, d: f64, seed: u64) -> Result<SweepRow> {
    let g = build_graph(spec, size, seed)?;
    let n = g.n();
    let nf = n as f64;
    let p = BoundParams {
        a: spec.a,
        b: spec.b,
        d,
        e: 1.0,
        c_large: 1.0,
        c_choke: 1.0,
        c_heavy: 1.0,
    };
    p.validate()?;
    let (res, demands, bound) = match spec.algo {
        Algo::SubsetSpanner => {
            let k = (nf.sqrt().ceil() as usize).clamp(1, n);
            let subset = crate::sweep::sample_subset(n, k, seed);
            let res = spanner::subset_spanner(&g, &subset, d)?;
            let mut raw = Vec::new();
            for (i, &a) in subset.iter().enumerate() {
                for &b in &subset[i + 1..] {
                    raw.push((a, b));
                }
            }
            let demands = PairSet::new(&raw, n)?;
            // Subset-spanner size bound |S|^{(2b+a-1)/2} n^{1-d(1-a)}.
            let bound = (subset.len() as f64).powf((2.0 * spec.b + spec.a - 1.0) / 2.0)
                * nf.powf(1.0 - d * (1.0 - spec.a));
            (res, demands, bound)
        }
        _ => {
            let sp = StandardParams::new(d, spec.a, spec.b, seed)?;
            let res = spanner::standard_spanner(&g, &sp)?;
            let demands = all_pairs(n)?;
            // Standard-spanner size bound n^{1 + ...} = n * density target.
            let bound = nf * sp.density_target(n);
            (res, demands, bound)
        }
    };
    let rep = verify::verify(&g, &res.edges, &demands, res.beta_target.max(1.0))?;
    if !rep.passed() {
        return Err(Error::internal("spanner failed its error certificate"));
    }
    let h_size = res.edges.len();
    Ok(SweepRow {
        family: spec.family.name().into(),
        algo: spec.algo.name().into(),
        n,
        m: g.m(),
        p_count: demands.len(),
        d,
        seed,
        h_size,
        max_error: rep.max_additive_error,
        bound,
        ratio: h_size as f64 / bound,
    })
}

pub(crate) fn sample_subset(n: usize, k: usize, seed: u64) -> Vec<crate::graph::Node> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<crate::graph::Node> = (0..n as u32).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    let mut out = ids[..k.min(n)].to_vec();
    out.sort_unstable();
    out
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for (i, &size) in spec.sizes.iter().enumerate() {
        if spec.algo.is_preserver() {
            if spec.family == Family::Layered {
                let seed = spec.seed.wrapping_add(i as u64);
                rows.push(preserver_cell(spec, size, 0, seed)?);
            } else {
                for (j, &pc) in spec.pair_counts.iter().enumerate() {
                    let seed = spec.seed.wrapping_add((i * 1000 + j) as u64);
                    rows.push(preserver_cell(spec, size, pc, seed)?);
                }
            }
        } else {
            for (j, &d) in spec.ds.iter().enumerate() {
                let seed = spec.seed.wrapping_add((i * 1000 + j) as u64);
                rows.push(spanner_cell(spec, size, d, seed)?);
            }
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::internal(format!("csv write: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::internal(format!("csv flush: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::internal(format!("csv utf8: {e}")))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec.map_err(|e| Error::Parse {
            line: 0,
            msg: format!("csv: {e}"),
        })?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> SweepSpec {
        SweepSpec {
            family: Family::Layered,
            algo: Algo::NaivePreserver,
            sizes: vec![3, 5],
            pair_counts: vec![],
            ds: vec![],
            a: 2.0 / 3.0,
            b: 2.0 / 3.0,
            seed: 1,
            cap: DEFAULT_CAP,
        }
    }

    #[test]
    fn layered_naive_rows_have_exact_sizes() {
        let rows = sweep(&base_spec()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].h_size, 9 * 2);
        assert_eq!(rows[1].h_size, 25 * 4);
    }

    #[test]
    fn csv_round_trip() {
        let rows = sweep(&base_spec()).unwrap();
        let text = rows_to_csv(&rows).unwrap();
        let back = rows_from_csv(&text).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn deterministic_bytes() {
        let mut spec = base_spec();
        spec.family = Family::Random;
        spec.sizes = vec![40];
        spec.pair_counts = vec![15];
        let a = rows_to_csv(&sweep(&spec).unwrap()).unwrap();
        let b = rows_to_csv(&sweep(&spec).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_refusal() {
        let mut spec = base_spec();
        spec.sizes = vec![47];
        spec.cap = 100;
        assert!(sweep(&spec).is_err());
    }

    #[test]
    fn empty_grids_rejected() {
        let mut spec = base_spec();
        spec.sizes = vec![];
        assert!(sweep(&spec).is_err());
        let mut spec = base_spec();
        spec.family = Family::Random;
        spec.algo = Algo::NewPreserver;
        spec.sizes = vec![30];
        spec.pair_counts = vec![];
        assert!(sweep(&spec).is_err());
    }

    #[test]
    fn spanner_sweep_runs() {
        let spec = SweepSpec {
            family: Family::Grid,
            algo: Algo::StandardSpanner,
            sizes: vec![6],
            pair_counts: vec![],
            ds: vec![0.3],
            a: 2.0 / 3.0,
            b: 2.0 / 3.0,
            seed: 4,
            cap: DEFAULT_CAP,
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].ratio > 0.0);
    }
}
