use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use paulilie::families::{all_subsets_family, chain_family};
use paulilie::numeric::verify_ladder;
use paulilie::{
    close, deterministic_isolation_schedule, derive_encoded, derive_odd_target, derive_target, parse_hamiltonian,
    randomized_isolation, apply_schedule_symbolic, Classification, ClosureAlgebra, DerivationTree, Hamiltonian,
    PhasedPauli, RandomizedIsolationParams, TrotterParams,
};
use rayon::prelude::*;
use serde_json::{json, Value};

/// Largest closure the CLI will attempt (`4^n − 1` strings).
const CLOSURE_QUBIT_CAP: usize = 10;
const SUBSETS_QUBIT_CAP: usize = 16;

/// Text for people, machine-readable form (JSON or CSV) for scripts.
pub struct Report {
    pub text: String,
    pub machine: String,
    pub exit: u8,
}

impl Report {
    fn json(text: String, value: Value, exit: u8) -> Report {
        let mut machine = serde_json::to_string_pretty(&value).expect("plain JSON values");
        machine.push('\n');
        Report { text, machine, exit }
    }

    fn csv(machine: String) -> Report {
        Report {
            text: String::new(),
            machine,
            exit: 0,
        }
    }
}

pub struct Error(String);

impl<E: std::error::Error> From<E> for Error {
    fn from(e: E) -> Error {
        Error(e.to_string())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Error> {
    Err(Error(msg.into()))
}

fn read_hamiltonian(path: &Path) -> Result<Hamiltonian, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error(format!("{}: {e}", path.display())))?;
    parse_hamiltonian(&text).map_err(|e| Error(format!("{}: {e}", path.display())))
}

fn parse_pauli(s: &str) -> Result<PhasedPauli, Error> {
    s.parse().map_err(|e| Error(format!("{s:?}: {e}")))
}

fn terms_json(h: &Hamiltonian) -> Value {
    h.terms()
        .iter()
        .map(|t| json!({ "coefficient": t.coefficient(), "pauli": t.pauli().to_string() }))
        .collect()
}

fn matrix_dim(n: usize) -> String {
    if n < 128 {
        (1u128 << n).to_string()
    } else {
        format!("2^{n}")
    }
}

fn dim_text(d: Option<u128>) -> String {
    d.map_or_else(|| "overflow".into(), |d| d.to_string())
}

fn components_text(components: &[Vec<usize>]) -> String {
    let parts: Vec<String> = components
        .iter()
        .map(|c| {
            let q: Vec<String> = c.iter().map(|q| (q + 1).to_string()).collect();
            format!("{{{}}}", q.join(","))
        })
        .collect();
    parts.join(" ")
}

pub fn classify(file: &Path) -> Result<Report, Error> {
    let h = read_hamiltonian(file)?;
    let n = h.num_qubits();
    let class = h.classify();
    let components = h.connected_components();
    let (odd, even) = h.parity_census();
    let (headline, exit) = match &class {
        Classification::Universal { dimension } => {
            (format!("Universal, su({}), dim {}", matrix_dim(n), dim_text(*dimension)), 0)
        }
        Classification::OddEntangling { algebra, dimension } => (
            format!("OddEntangling, {algebra}({}), dim {}", matrix_dim(n), dim_text(*dimension)),
            2,
        ),
        Classification::NotEntangling { .. } => ("NotEntangling".to_string(), 3),
    };
    let mut text = format!("{headline}\n");
    writeln!(text, "qubits {n}, terms {} (odd {odd}, even {even})", h.len()).unwrap();
    writeln!(text, "components {}", components_text(&components)).unwrap();
    let value = json!({
        "num_qubits": n,
        "terms": h.len(),
        "classification": class,
        "components": components,
        "parity": { "odd": odd, "even": even },
    });
    Ok(Report::json(text, value, exit))
}

pub fn closure(file: &Path, include_locals: bool, dump: bool) -> Result<Report, Error> {
    let h = read_hamiltonian(file)?;
    let n = h.num_qubits();
    if n > CLOSURE_QUBIT_CAP {
        return fail(format!("closure is limited to {CLOSURE_QUBIT_CAP} qubits, got {n}"));
    }
    let c = close(&h, include_locals);
    let algebra = c.algebra();
    let hist = c.weight_histogram();
    let mut text = format!("dimension {}", c.dimension());
    match algebra {
        ClosureAlgebra::Other => text.push('\n'),
        a => writeln!(text, " ({a}({}))", matrix_dim(n)).unwrap(),
    }
    writeln!(text, "classification {}", h.classify().name()).unwrap();
    writeln!(text, "generators {}, levels {:?}", c.generator_count(), c.level_sizes()).unwrap();
    let weights: Vec<String> = hist
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(w, k)| format!("{w}:{k}"))
        .collect();
    writeln!(text, "weights {}", weights.join(" ")).unwrap();
    let mut value = json!({
        "num_qubits": n,
        "include_locals": include_locals,
        "dimension": c.dimension(),
        "algebra": algebra,
        "classification": h.classify(),
        "generators": c.generator_count(),
        "level_sizes": c.level_sizes(),
        "weight_histogram": hist,
    });
    if dump {
        let elements: Vec<String> = c.sorted_elements().iter().map(|p| p.to_string()).collect();
        for e in &elements {
            writeln!(text, "{e}").unwrap();
        }
        value["elements"] = json!(elements);
    }
    Ok(Report::json(text, value, 0))
}

fn resolve_term(h: &Hamiltonian, which: &str) -> Result<usize, Error> {
    if let Ok(i) = which.parse::<usize>() {
        if i < h.len() {
            return Ok(i);
        }
        return fail(format!("term index {i} out of range (Hamiltonian has {} terms)", h.len()));
    }
    let p = parse_pauli(which)?;
    if p.num_qubits() != h.num_qubits() {
        return fail(format!("term {which} has {} qubits, expected {}", p.num_qubits(), h.num_qubits()));
    }
    h.term_index(&p).map_or_else(|| fail(format!("{which} is not a term of the Hamiltonian")), Ok)
}

pub fn isolate(file: &Path, term: &str, randomized: bool, m: usize, seed: Option<u64>) -> Result<Report, Error> {
    let h = read_hamiltonian(file)?;
    let index = resolve_term(&h, term)?;
    let target = &h.terms()[index];
    let mut text = format!("term {index}: {target}\n");
    let mut value = json!({
        "term_index": index,
        "term": { "coefficient": target.coefficient(), "pauli": target.pauli().to_string() },
    });
    let (schedule, result, success) = if randomized {
        let seed = seed.unwrap_or_else(rand::random);
        let run = randomized_isolation(&h, &RandomizedIsolationParams { m, seed, target: index })?;
        writeln!(text, "method rand, seed {seed}, m {m}, draws {}", run.draws).unwrap();
        value["method"] = json!("rand");
        value["seed"] = json!(seed);
        value["draws"] = json!(run.draws);
        (run.schedule, run.result, run.success)
    } else {
        let schedule = deterministic_isolation_schedule(&h, index)?;
        let result = apply_schedule_symbolic(&h, &schedule)?;
        let success = result.as_single_term().is_some();
        writeln!(text, "method det, layers {}", schedule.layer_count()).unwrap();
        value["method"] = json!("det");
        (schedule, result, success)
    };
    writeln!(text, "scale {}", schedule.scale()).unwrap();
    writeln!(text, "result {result}").unwrap();
    writeln!(text, "success {success}").unwrap();
    value["schedule"] = json!(schedule.to_record());
    value["result"] = terms_json(&result);
    value["success"] = json!(success);
    Ok(Report::json(text, value, if success { 0 } else { 4 }))
}

pub fn synthesize(file: &Path, target: &str, encoded: bool, dump_tree: Option<&Path>) -> Result<Report, Error> {
    let h = read_hamiltonian(file)?;
    let target = parse_pauli(target)?;
    let mut value = json!({ "target": target.to_string() });
    let mut text = String::new();
    let tree = if encoded {
        let e = derive_encoded(&h, &target)?;
        writeln!(text, "route encoded").unwrap();
        writeln!(text, "extended target {}", e.extended_target).unwrap();
        writeln!(text, "ancilla qubit {} in {}", e.ancilla + 1, e.ancilla_state).unwrap();
        value["route"] = json!("encoded");
        value["extended_target"] = json!(e.extended_target.to_string());
        value["ancilla"] = json!(e.ancilla);
        value["ancilla_state"] = json!(e.ancilla_state);
        e.tree
    } else if h.classify().is_odd_entangling() && target.is_odd() {
        writeln!(text, "route odd").unwrap();
        value["route"] = json!("odd");
        derive_odd_target(&h, &target)?
    } else {
        writeln!(text, "route closure").unwrap();
        value["route"] = json!("closure");
        derive_target(&h, &target)?
    };
    writeln!(text, "result {}", tree.effective()).unwrap();
    writeln!(
        text,
        "nodes {}, depth {}, commutators {}",
        tree.node_count(),
        tree.depth(),
        tree.commutator_count()
    )
    .unwrap();
    value["result"] = terms_json(tree.effective());
    value["nodes"] = json!(tree.node_count());
    value["depth"] = json!(tree.depth());
    value["commutators"] = json!(tree.commutator_count());
    if let Some(path) = dump_tree {
        std::fs::write(path, tree.to_json()).map_err(|e| Error(format!("{}: {e}", path.display())))?;
        writeln!(text, "tree written to {}", path.display()).unwrap();
    }
    Ok(Report::json(text, value, 0))
}

fn csv_string(rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w)?;
    let bytes = w.into_inner().map_err(|e| Error(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

pub fn verify(paths: &[PathBuf], time: f64, delta: f64, cycle_delta: f64, ladder: usize) -> Result<Report, Error> {
    if !(delta > 0.0 && cycle_delta > 0.0 && time.is_finite()) {
        return fail("--delta and --cycle-delta must be positive and --time finite");
    }
    if ladder == 0 {
        return fail("--ladder must be at least 1");
    }
    let trees = paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| Error(format!("{}: {e}", p.display())))?;
            DerivationTree::from_json(&text).map_err(|e| Error(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let params = TrotterParams::new(time, delta).with_cycle_delta(cycle_delta);
    let ladders = trees
        .par_iter()
        .map(|t| verify_ladder(t, &params, ladder))
        .collect::<Result<Vec<_>, _>>()?;
    let machine = csv_string(|w| {
        w.write_record(["derivation", "time", "delta", "cycle_delta", "error"])?;
        for (path, rows) in paths.iter().zip(&ladders) {
            let mut cd = cycle_delta;
            for (d, err) in rows {
                w.write_record([
                    path.display().to_string(),
                    time.to_string(),
                    d.to_string(),
                    cd.to_string(),
                    format!("{err:e}"),
                ])?;
                cd /= 2.0;
            }
        }
        Ok(())
    })?;
    Ok(Report::csv(machine))
}

pub fn sweep(subsets: bool, ns: &[usize], ms: &[usize], trials: u64, seed: Option<u64>) -> Result<Report, Error> {
    if trials == 0 {
        return fail("--trials must be positive");
    }
    if let Some(&m) = ms.iter().find(|&&m| m == 0 || m > 60) {
        return fail(format!("m must be in 1..=60, got {m}"));
    }
    for &n in ns {
        if n < 2 || (subsets && n > SUBSETS_QUBIT_CAP) {
            return fail(format!("family size {n} out of range"));
        }
    }
    let seed = seed.unwrap_or_else(rand::random);
    let mut rows = Vec::new();
    for &n in ns {
        let h = if subsets { all_subsets_family(n) } else { chain_family(n) };
        let terms = h.len();
        for &m in ms {
            let runs = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let params = RandomizedIsolationParams {
                        m,
                        seed: seed.wrapping_add(i),
                        target: (i % terms as u64) as usize,
                    };
                    randomized_isolation(&h, &params).map(|r| (r.success, r.draws))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let failures = runs.iter().filter(|(ok, _)| !ok).count() as u64;
            let draws: u64 = runs.iter().map(|(_, d)| d).sum();
            let bound = terms as f64 / 2f64.powi(m as i32);
            let acceptance = (trials * m as u64) as f64 / draws as f64;
            log::info!("n={n} m={m}: {failures}/{trials} failures, bound {bound}");
            rows.push([
                n.to_string(),
                terms.to_string(),
                m.to_string(),
                trials.to_string(),
                failures.to_string(),
                bound.to_string(),
                (failures as f64 / trials as f64).to_string(),
                format!("{acceptance:.6}"),
                seed.to_string(),
            ]);
        }
    }
    let machine = csv_string(|w| {
        w.write_record([
            "n",
            "N",
            "m",
            "trials",
            "failures",
            "bound",
            "failure_rate",
            "acceptance_rate",
            "seed",
        ])?;
        for r in &rows {
            w.write_record(r)?;
        }
        Ok(())
    })?;
    Ok(Report::csv(machine))
}
