//! Executes a [`RunSpec`] and writes its artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use cpd_core::energy::{el_residuals, energy_of_diagram, hexagonal_reference, rescaled_energy};
use cpd_core::geometry::{power_diagram, ConvexPolygon, PowerDiagram, WeightedGenerator};
use cpd_core::lloyd::{run_lloyd, LloydConfig, LloydResult};
use cpd_core::search::{
    estimate_cell_count, genetic_search_with, random_init, side_histogram, SearchConfig, SearchResult,
};
use serde::Serialize;

use crate::dto::{
    CandidateDto, DiagramDto, LloydResultDto, PolygonDto, ReferenceDto, SearchResultDto, StateDto,
    SweepEntryDto, SweepResultDto,
};
use crate::error::CliError;
use crate::exec::Rayon;
use crate::spec::{validate, Format, Mode, RunSpec};
use crate::verify::{self, Check};
use crate::{svg, trace};

/// Derived view of a configuration: masses, energies, residuals and sides.
pub fn describe_state(
    gens: &[WeightedGenerator],
    domain: &ConvexPolygon,
    lambda: f64,
    converged: bool,
) -> Result<(StateDto, PowerDiagram), CliError> {
    let diagram = power_diagram(gens, domain)?;
    let energy = energy_of_diagram(&diagram, gens, lambda);
    let rescaled = (lambda > 0.0).then(|| rescaled_energy(&energy, &hexagonal_reference(lambda, domain.area())));
    let residuals = el_residuals(gens, domain, lambda)?;
    let state = StateDto {
        generators: gens.iter().map(|g| g.site.into()).collect(),
        weights: gens.iter().map(|g| g.weight).collect(),
        masses: diagram.areas(),
        energy: energy.into(),
        rescaled_energy: rescaled,
        cell_count: diagram.live_cells(),
        residuals: residuals.into_iter().map(Into::into).collect(),
        converged,
        side_histogram: side_histogram(&diagram),
    };
    Ok((state, diagram))
}

pub fn lloyd_config(spec: &RunSpec, lambda: f64) -> LloydConfig {
    let mut cfg = LloydConfig::new(lambda);
    if let Some(n) = spec.max_iter {
        cfg.max_iterations = n;
    }
    if let Some(t) = spec.tol {
        cfg.displacement_tolerance = t;
    }
    cfg
}

pub fn search_config(spec: &RunSpec, lambda: f64) -> SearchConfig {
    let mut cfg = SearchConfig::new(lambda);
    cfg.restarts = spec.restarts;
    cfg.interval_width = spec.width;
    cfg.seed = spec.seed;
    if let Some(n) = spec.max_iter {
        cfg.round_iterations = n;
    }
    if let Some(t) = spec.tol {
        cfg.energy_dedup_tolerance = t;
    }
    cfg
}

pub fn lloyd_run(
    spec: &RunSpec,
    domain: &ConvexPolygon,
    lambda: f64,
) -> Result<(LloydResultDto, LloydResult), CliError> {
    let m = spec
        .sites
        .unwrap_or_else(|| (estimate_cell_count(lambda, domain.area()).round() as usize).max(1));
    let init = random_init(m, domain, spec.seed);
    let result = run_lloyd(&init, domain, &lloyd_config(spec, lambda))?;
    let (state, diagram) = describe_state(&result.generators, domain, lambda, result.converged)?;
    let dto = LloydResultDto {
        mode: "lloyd".into(),
        lambda,
        seed: spec.seed,
        domain: domain.into(),
        initial_sites: m,
        iterations: result.trace.steps(),
        state,
        diagram: DiagramDto::from(&diagram),
    };
    Ok((dto, result))
}

pub fn search_run(
    spec: &RunSpec,
    domain: &ConvexPolygon,
    lambda: f64,
) -> Result<(SearchResultDto, SearchResult), CliError> {
    let result = genetic_search_with(domain, &search_config(spec, lambda), &Rayon)?;
    let candidate = |c: &cpd_core::search::Candidate| -> Result<CandidateDto, CliError> {
        let (state, _) = describe_state(&c.generators, domain, lambda, c.converged)?;
        Ok(CandidateDto::from_candidate(c, state))
    };
    let ranked = result.ranked.iter().map(candidate).collect::<Result<Vec<_>, _>>()?;
    let diagram = power_diagram(&result.best.generators, domain)?;
    let dto = SearchResultDto {
        mode: "search".into(),
        lambda,
        seed: spec.seed,
        domain: PolygonDto::from(domain),
        interval: [result.interval.0, result.interval.1],
        reference: ReferenceDto::from(&result.reference),
        round_best: result.round_best.clone(),
        best: ranked[0].clone(),
        ranked,
        side_histogram: result.side_histogram.clone(),
        diagram: DiagramDto::from(&diagram),
    };
    Ok((dto, result))
}

/// Canonical JSON text of an artifact.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Outcome of a successful [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    /// Verification checks (verify mode only).
    pub checks: Vec<Check>,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    started_unix_seconds: u64,
    elapsed_seconds: f64,
    threads: usize,
    version: &'static str,
    spec: &'a RunSpec,
}

struct Writer {
    files: Vec<PathBuf>,
}

impl Writer {
    fn put(&mut self, path: PathBuf, contents: &str) -> Result<(), CliError> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

/// Validates the spec, runs it, and writes the requested artifacts into
/// `spec.out`.
pub fn run(spec: &RunSpec) -> Result<RunSummary, CliError> {
    let diagnostics = validate(spec);
    if !diagnostics.is_empty() {
        return Err(CliError::Config(diagnostics));
    }
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let domain = spec.domain.resolve().expect("validated");
    let mut w = Writer { files: Vec::new() };
    let mut checks = Vec::new();
    fs::create_dir_all(&spec.out)?;

    match spec.mode {
        Mode::Lloyd => write_lloyd(spec, &domain, spec.lambdas[0], &spec.out, &mut w)?,
        Mode::Search => {
            write_search(spec, &domain, spec.lambdas[0], &spec.out, &mut w)?;
        }
        Mode::Sweep => {
            let mut entries = Vec::new();
            for (k, &lambda) in spec.lambdas.iter().enumerate() {
                let name = format!("lambda-{k:02}");
                let best = write_search(spec, &domain, lambda, &spec.out.join(&name), &mut w)?;
                entries.push(SweepEntryDto {
                    lambda,
                    directory: name,
                    cell_count: best.state.cell_count,
                    energy: best.state.energy,
                    rescaled_energy: best.state.rescaled_energy.expect("lambda > 0"),
                });
            }
            if spec.wants(Format::Json) {
                let sweep = SweepResultDto { mode: "sweep".into(), seed: spec.seed, entries };
                w.put(spec.out.join("sweep.json"), &to_json(&sweep)?)?;
            }
        }
        Mode::Verify => {
            checks = verify::suite();
            if spec.wants(Format::Json) {
                w.put(spec.out.join("verify.json"), &to_json(&checks)?)?;
            }
        }
    }

    let meta = Metadata {
        started_unix_seconds: started,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        version: env!("CARGO_PKG_VERSION"),
        spec,
    };
    w.put(spec.out.join("metadata.json"), &to_json(&meta)?)?;
    Ok(RunSummary { files: w.files, checks })
}

fn write_lloyd(spec: &RunSpec, domain: &ConvexPolygon, lambda: f64, dir: &Path, w: &mut Writer) -> Result<(), CliError> {
    let (dto, result) = lloyd_run(spec, domain, lambda)?;
    if spec.wants(Format::Json) {
        w.put(dir.join("result.json"), &to_json(&dto)?)?;
    }
    if spec.wants(Format::Csv) {
        let mut buf = Vec::new();
        trace::write_trace(&mut buf, &result.trace)?;
        w.put(dir.join("trace.csv"), &String::from_utf8(buf).expect("ascii"))?;
    }
    if spec.wants(Format::Svg) {
        w.put(dir.join("diagram.svg"), &svg::render(&result.diagram, &result.generators))?;
    }
    Ok(())
}

fn write_search(
    spec: &RunSpec,
    domain: &ConvexPolygon,
    lambda: f64,
    dir: &Path,
    w: &mut Writer,
) -> Result<CandidateDto, CliError> {
    let (dto, result) = search_run(spec, domain, lambda)?;
    if spec.wants(Format::Json) {
        w.put(dir.join("result.json"), &to_json(&dto)?)?;
    }
    if spec.wants(Format::Csv) {
        let mut text = String::from("rank,cells,total,perimeter,transport,rescaled,initial_sites,replica\n");
        for (k, c) in dto.ranked.iter().enumerate() {
            let e = &c.state.energy;
            text.push_str(&format!(
                "{k},{},{},{},{},{},{},{}\n",
                c.state.cell_count,
                e.total,
                e.perimeter,
                e.transport,
                c.state.rescaled_energy.unwrap_or(f64::NAN),
                c.provenance.initial_sites,
                c.provenance.replica
            ));
        }
        w.put(dir.join("ranked.csv"), &text)?;
    }
    if spec.wants(Format::Svg) {
        for (k, c) in result.ranked.iter().enumerate() {
            let d = power_diagram(&c.generators, domain)?;
            let name = if k == 0 { "best.svg".to_owned() } else { format!("candidates/rank-{k:03}.svg") };
            w.put(dir.join(name), &svg::render(&d, &c.generators))?;
        }
    }
    Ok(dto.best)
}

/// Recomputes the energy of a stored lloyd or search result from its
/// generators and weights. Returns `(stored, recomputed)` totals.
pub fn reevaluate(json: &str) -> Result<(f64, f64), CliError> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    let (domain, lambda, state): (PolygonDto, f64, StateDto) = match value["mode"].as_str() {
        Some("search") => {
            let r: SearchResultDto = serde_json::from_value(value)?;
            (r.domain, r.lambda, r.best.state)
        }
        _ => {
            let r: LloydResultDto = serde_json::from_value(value)?;
            (r.domain, r.lambda, r.state)
        }
    };
    let domain = domain.to_polygon()?;
    let gens = state.weighted_generators();
    let diagram = power_diagram(&gens, &domain)?;
    let e = energy_of_diagram(&diagram, &gens, lambda);
    Ok((state.energy.total, e.total))
}
