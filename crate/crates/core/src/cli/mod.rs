//! Command-line front end: report assembly and the `demo`, `verdict` and
//! `discriminate` commands. The binary in `main.rs` is a thin wrapper over
//! these runners, which keeps every command testable in-process.
//!
//! Reports have two sections. The human section is an aligned plain-text
//! table; the machine section is a list of unique `KEY=VALUE` lines with
//! reals formatted to 12 fractional digits, byte-identical across runs
//! with the same inputs and seed (including under different
//! `LOCCLAB_THREADS` settings).

mod format;

pub use format::{format_ensemble, instantiate_protocol, parse_ensemble, parse_protocol, ProtocolSpec};

use crate::analysis::{
    bell_ensemble, domino_ensemble, holism_verdict, HolismVerdict,
};
use crate::classical::{verify_all_properties_local, FinitePhaseSpace, ProductSpace};
use crate::error::Result;
use crate::locc::{bell_parity_protocol, global_discrimination, Ensemble, LoccProtocol};

/// Default number of Haar samples per scan.
pub const DEFAULT_SAMPLES: usize = 1000;
/// Default seed, printed in every stochastic report header.
pub const DEFAULT_SEED: u64 = 42;

/// Fixed-point rendering used for every real in the machine section.
pub fn fmt_real(x: f64) -> String {
    format!("{:.12}", x)
}

/// Two-section command report.
#[derive(Debug, Clone, Default)]
pub struct Report {
    title: String,
    human: Vec<String>,
    machine: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            human: Vec::new(),
            machine: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    /// Appends rows as a left-aligned column table.
    pub fn table(&mut self, rows: &[Vec<String>]) {
        if rows.is_empty() {
            return;
        }
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut widths = vec![0usize; cols];
        for row in rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        for row in rows {
            let mut line = String::from("  ");
            for (i, cell) in row.iter().enumerate() {
                line.push_str(cell);
                if i + 1 < row.len() {
                    line.push_str(&" ".repeat(widths[i] - cell.chars().count() + 2));
                }
            }
            self.human.push(line.trim_end().to_string());
        }
    }

    /// Appends one machine key; keys must be unique within a report.
    pub fn kv(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        assert!(
            self.machine.iter().all(|(k, _)| *k != key),
            "duplicate machine key '{}'",
            key
        );
        self.machine.push((key, value.into()));
    }

    pub fn kv_real(&mut self, key: impl Into<String>, value: f64) {
        self.kv(key, fmt_real(value));
    }

    pub fn machine_value(&self, key: &str) -> Option<&str> {
        self.machine
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Renders the report; with `machine_only` only the KEY=VALUE lines.
    pub fn render(&self, machine_only: bool) -> String {
        let mut out = String::new();
        if !machine_only {
            out.push_str(&format!("== locclab {} ==\n", self.title));
            for line in &self.human {
                out.push_str(line);
                out.push('\n');
            }
            out.push_str("\n== machine ==\n");
        }
        for (k, v) in &self.machine {
            out.push_str(&format!("{}={}\n", k, v));
        }
        out
    }
}

/// The built-in demonstrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoKind {
    /// Parity discrimination of the two total-spin Bell eigenstates.
    BellParity,
    /// Full holism verdict for the nine product states on 3x3.
    Domino,
    /// Exhaustive local-inference check on a 2x3 classical product space.
    Classical,
}

fn push_verdict(report: &mut Report, verdict: &HolismVerdict) {
    report.kv("ENSEMBLE", verdict.ensemble_id.clone());
    report.kv("VERDICT", verdict.verdict.as_str());
    report.kv_real("GLOBAL_SUCCESS", verdict.global_success);
    report.kv_real("BEST_LOCC_SUCCESS", verdict.best_locc_success_found);
    report.kv("BEST_LOCC_PROTOCOL", verdict.best_protocol.clone());
    report.kv_real("SPOIL_FRACTION", verdict.spoil_fraction);
    report.kv_real("SPOIL_FRACTION_A", verdict.spoil_fraction_a);
    report.kv_real("SPOIL_FRACTION_B", verdict.spoil_fraction_b);
    report.kv("LIBRARY_VERSION", verdict.library_version.to_string());
    for (name, success) in &verdict.candidates {
        report.kv(
            format!("CANDIDATE_{}", name.replace('-', "_").to_uppercase()),
            fmt_real(*success),
        );
    }
    report.kv("CAVEAT", verdict.caveat.clone());
}

fn verdict_human(report: &mut Report, verdict: &HolismVerdict) {
    report.line(format!("verdict: {}", verdict.verdict));
    report.line(String::new());
    report.line("candidate protocols (library v1):".to_string());
    let mut rows = vec![vec![
        "protocol".to_string(),
        "success".to_string(),
    ]];
    for (name, success) in &verdict.candidates {
        rows.push(vec![name.clone(), fmt_real(*success)]);
    }
    report.table(&rows);
    report.line(String::new());
    report.line(format!(
        "global baseline {}   best LOCC {} ({})",
        fmt_real(verdict.global_success),
        fmt_real(verdict.best_locc_success_found),
        verdict.best_protocol
    ));
    report.line(format!(
        "spoil fraction {} (party A {}, party B {})",
        fmt_real(verdict.spoil_fraction),
        fmt_real(verdict.spoil_fraction_a),
        fmt_real(verdict.spoil_fraction_b)
    ));
    report.line(format!("caveat: {}", verdict.caveat));
}

/// Runs `demo bell-parity`: executes the parity protocol on both
/// total-spin eigenstates, prints the transcripts, and scores it.
/// The verdict is conclusive here because a perfect protocol exists.
pub fn run_demo_bell_parity(seed: u64) -> Result<Report> {
    let ensemble = bell_ensemble(2)?;
    let protocol = bell_parity_protocol();

    let mut report = Report::new(format!("demo bell-parity (seed={})", seed));
    let mut rows = vec![vec![
        "prepared".to_string(),
        "events".to_string(),
        "probability".to_string(),
        "guess".to_string(),
    ]];
    for member in ensemble.members() {
        for t in protocol.execute(&member.state.density())? {
            if t.probability <= 0.0 {
                continue;
            }
            let events: Vec<String> =
                t.events.iter().map(|(p, o)| format!("{}:{}", p, o)).collect();
            rows.push(vec![
                member.label.clone(),
                events.join(" "),
                fmt_real(t.probability),
                t.final_guess.clone().unwrap_or_else(|| "-".into()),
            ]);
        }
    }
    report.table(&rows);

    let discrimination = protocol.discriminate(&ensemble)?;
    let global = global_discrimination(&ensemble)?;
    report.line(String::new());
    report.line(format!(
        "parity protocol succeeds with probability {}; equal parity -> phi-minus, \
         unequal -> psi-minus",
        fmt_real(discrimination.success_probability)
    ));

    report.kv("DEMO", "bell-parity");
    report.kv("SEED", seed.to_string());
    report.kv("ENSEMBLE", ensemble.id());
    report.kv("PROTOCOL", protocol.name());
    report.kv_real("SUCCESS_PROB", discrimination.success_probability);
    report.kv_real("GLOBAL_SUCCESS", global.success_probability);
    report.kv("PERFECT", discrimination.perfect.to_string());
    // a perfect LOCC protocol settles the question for this ensemble
    report.kv(
        "VERDICT",
        if discrimination.perfect {
            "no-holism-evidence"
        } else {
            "holism-evidence"
        },
    );
    Ok(report)
}

/// Runs `demo domino`: the full holism verdict for the nine product
/// states.
pub fn run_demo_domino(samples: usize, seed: u64) -> Result<Report> {
    let ensemble = domino_ensemble();
    let verdict = holism_verdict(&ensemble, samples, seed)?;
    let mut report = Report::new(format!(
        "demo domino (seed={} samples={})",
        seed, samples
    ));
    verdict_human(&mut report, &verdict);
    report.kv("DEMO", "domino");
    report.kv("SEED", seed.to_string());
    report.kv("SAMPLES", samples.to_string());
    push_verdict(&mut report, &verdict);
    Ok(report)
}

/// Runs `demo classical`: exhaustive local inference on a 2x3 space.
pub fn run_demo_classical() -> Result<Report> {
    let space = ProductSpace::new(FinitePhaseSpace::numbered(2), FinitePhaseSpace::numbered(3));
    let result = verify_all_properties_local(&space)?;
    let mut report = Report::new("demo classical (2x3 product space)");
    report.line(format!(
        "checked all {} subsets of the 2x3 product space: every global property \
         was inferred correctly from local reads plus communication, and every \
         rectangle decomposition was disjoint and exact",
        result.properties_checked
    ));
    report.line(
        "finite model: these spaces stand in for continuum phase/configuration \
         spaces, where the same rectangle structure generates the product \
         proposition algebra"
            .to_string(),
    );
    report.kv("DEMO", "classical");
    report.kv("SPACE", "2x3");
    report.kv("PROPERTIES_CHECKED", result.properties_checked.to_string());
    report.kv("ALL_INFERABLE", result.all_inferable.to_string());
    Ok(report)
}

pub fn run_demo(kind: DemoKind, samples: usize, seed: u64) -> Result<Report> {
    match kind {
        DemoKind::BellParity => run_demo_bell_parity(seed),
        DemoKind::Domino => run_demo_domino(samples, seed),
        DemoKind::Classical => run_demo_classical(),
    }
}

/// Runs `verdict` on a parsed ensemble.
pub fn run_verdict(ensemble: &Ensemble, samples: usize, seed: u64) -> Result<Report> {
    let verdict = holism_verdict(ensemble, samples, seed)?;
    let mut report = Report::new(format!(
        "verdict for '{}' (seed={} samples={})",
        ensemble.id(),
        seed,
        samples
    ));
    report.line(format!(
        "ensemble '{}': {} members on {}x{}",
        ensemble.id(),
        ensemble.len(),
        ensemble.dims().0,
        ensemble.dims().1
    ));
    verdict_human(&mut report, &verdict);
    report.kv("SEED", seed.to_string());
    report.kv("SAMPLES", samples.to_string());
    report.kv("MEMBERS", ensemble.len().to_string());
    report.kv(
        "DIMS",
        format!("{}x{}", ensemble.dims().0, ensemble.dims().1),
    );
    push_verdict(&mut report, &verdict);
    Ok(report)
}

/// Runs `discriminate`: scores a protocol file against an ensemble.
pub fn run_discriminate(ensemble: &Ensemble, protocol: &LoccProtocol) -> Result<Report> {
    let result = protocol.discriminate(ensemble)?;
    let mut report = Report::new(format!(
        "discriminate '{}' with '{}'",
        ensemble.id(),
        protocol.name()
    ));
    let mut rows = vec![vec!["member".to_string(), "P(correct)".to_string()]];
    for (label, p) in &result.per_member {
        rows.push(vec![label.clone(), fmt_real(*p)]);
    }
    report.table(&rows);
    report.line(String::new());
    report.line(format!(
        "success probability {}{}",
        fmt_real(result.success_probability),
        if result.perfect { " (perfect)" } else { "" }
    ));
    report.kv("ENSEMBLE", ensemble.id());
    report.kv("PROTOCOL", protocol.name());
    report.kv_real("SUCCESS_PROB", result.success_probability);
    report.kv("PERFECT", result.perfect.to_string());
    for (label, p) in &result.per_member {
        report.kv(format!("MEMBER_{}", label), fmt_real(*p));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_parity_demo_report() {
        let report = run_demo(DemoKind::BellParity, DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert_eq!(report.machine_value("SUCCESS_PROB"), Some("1.000000000000"));
        assert_eq!(report.machine_value("VERDICT"), Some("no-holism-evidence"));
        assert_eq!(report.machine_value("PROTOCOL"), Some("bell-parity"));
        let rendered = report.render(false);
        assert!(rendered.contains("== machine =="));
        assert!(rendered.contains("SUCCESS_PROB=1.000000000000"));
    }

    #[test]
    fn classical_demo_report() {
        let report = run_demo(DemoKind::Classical, DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert_eq!(report.machine_value("PROPERTIES_CHECKED"), Some("64"));
        assert_eq!(report.machine_value("ALL_INFERABLE"), Some("true"));
    }

    #[test]
    fn domino_demo_report_smoke() {
        let report = run_demo(DemoKind::Domino, 8, DEFAULT_SEED).unwrap();
        assert_eq!(report.machine_value("VERDICT"), Some("holism-evidence"));
        assert_eq!(report.machine_value("SPOIL_FRACTION"), Some("1.000000000000"));
        assert_eq!(report.machine_value("GLOBAL_SUCCESS"), Some("1.000000000000"));
        assert!(report.machine_value("CAVEAT").unwrap().contains("sample-based"));
    }

    #[test]
    fn machine_only_render_has_no_human_section() {
        let report = run_demo(DemoKind::Classical, DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        let rendered = report.render(true);
        assert!(!rendered.contains("== machine =="));
        assert!(rendered.starts_with("DEMO=classical\n"));
        for line in rendered.lines() {
            assert!(line.contains('='), "unexpected non-machine line '{}'", line);
        }
    }

    #[test]
    fn verdict_runner_on_two_bells() {
        let ensemble = bell_ensemble(2).unwrap();
        let report = run_verdict(&ensemble, 8, DEFAULT_SEED).unwrap();
        assert_eq!(report.machine_value("VERDICT"), Some("no-holism-evidence"));
        assert_eq!(report.machine_value("BEST_LOCC_PROTOCOL"), Some("bell-parity"));
        assert_eq!(report.machine_value("BEST_LOCC_SUCCESS"), Some("1.000000000000"));
    }

    #[test]
    fn discriminate_runner_reports_members() {
        let ensemble = bell_ensemble(2).unwrap();
        let report = run_discriminate(&ensemble, &bell_parity_protocol()).unwrap();
        assert_eq!(report.machine_value("SUCCESS_PROB"), Some("1.000000000000"));
        assert_eq!(report.machine_value("MEMBER_psi-minus"), Some("1.000000000000"));
        assert_eq!(report.machine_value("MEMBER_phi-minus"), Some("1.000000000000"));
    }
}
