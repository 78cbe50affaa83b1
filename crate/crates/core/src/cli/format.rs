//! Line-oriented file formats for ensembles and protocols.
//!
//! Ensemble files:
//!
//! ```text
//! # comment
//! DIMS <dA> <dB>
//! STATE <label> <prior> <amp_0> ... <amp_{dA*dB-1}>
//! ```
//!
//! Amplitudes are A-major complex literals `(<re>,<im>)` with no internal
//! spaces. Priors and state norms may deviate from 1 by at most 1e-6 and
//! are renormalised; larger deviations are E_NORM errors.
//!
//! Protocol files:
//!
//! ```text
//! NODE <id> <A|B> COMP
//! NODE <id> <A|B> BASIS <amp_00> ... <amp_{d*d-1}>   # row-major unitary
//! LEAF <id> <guess|->
//! EDGE <parent> <outcome> <child>
//! ```
//!
//! The first NODE or LEAF line is the root. BASIS columns are the measured
//! basis; outcome labels are the column indices "0", "1", ...
//! Parsing is dimension-agnostic; binding against a concrete ensemble
//! happens in [`instantiate_protocol`].

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, ParseErrorKind, Result};
use crate::hilbert::{CMatrix, Party, StateVector};
use crate::locc::{Ensemble, EnsembleMember, LoccProtocol, MemberState, ProtocolNode};
use crate::operation::Instrument;
use crate::tol;

/// Whitespace-separated tokens with their 1-based column positions.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_complex(line_no: usize, col: usize, token: &str) -> Result<Complex64> {
    let inner = token
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| {
            Error::parse(
                line_no,
                col,
                ParseErrorKind::Syntax,
                format!("expected complex literal (re,im), got '{}'", token),
            )
        })?;
    let mut parts = inner.splitn(2, ',');
    let (re_str, im_str) = match (parts.next(), parts.next()) {
        (Some(re), Some(im)) => (re, im),
        _ => {
            return Err(Error::parse(
                line_no,
                col,
                ParseErrorKind::Syntax,
                format!("complex literal '{}' needs one comma", token),
            ))
        }
    };
    let parse_part = |s: &str| -> Result<f64> {
        let value: f64 = s.trim().parse().map_err(|_| {
            Error::parse(
                line_no,
                col,
                ParseErrorKind::Syntax,
                format!("cannot parse '{}' as a real number", s),
            )
        })?;
        if !value.is_finite() {
            return Err(Error::parse(
                line_no,
                col,
                ParseErrorKind::Syntax,
                "non-finite amplitude".to_string(),
            ));
        }
        Ok(value)
    };
    Ok(Complex64::new(parse_part(re_str)?, parse_part(im_str)?))
}

fn parse_dim(line_no: usize, col: usize, token: &str) -> Result<usize> {
    let d: usize = token.parse().map_err(|_| {
        Error::parse(
            line_no,
            col,
            ParseErrorKind::Syntax,
            format!("cannot parse '{}' as a dimension", token),
        )
    })?;
    if d == 0 || d > tol::DIM_CAP {
        return Err(Error::parse(
            line_no,
            col,
            ParseErrorKind::Syntax,
            format!("dimension {} outside 1..={}", d, tol::DIM_CAP),
        ));
    }
    Ok(d)
}

/// Parses an ensemble file. See the module docs for the grammar.
pub fn parse_ensemble(text: &str) -> Result<Ensemble> {
    let mut dims: Option<(usize, usize)> = None;
    let mut parsed: Vec<(usize, String, f64, Vec<Complex64>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let toks = tokens(line);
        let (col0, directive) = toks[0];
        match directive {
            "DIMS" => {
                if dims.is_some() {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "DIMS declared twice".to_string(),
                    ));
                }
                if !parsed.is_empty() {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "DIMS must precede all STATE lines".to_string(),
                    ));
                }
                if toks.len() != 3 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        format!("DIMS takes exactly two arguments, got {}", toks.len() - 1),
                    ));
                }
                let da = parse_dim(line_no, toks[1].0, toks[1].1)?;
                let db = parse_dim(line_no, toks[2].0, toks[2].1)?;
                dims = Some((da, db));
            }
            "STATE" => {
                let (da, db) = dims.ok_or_else(|| {
                    Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "STATE before DIMS".to_string(),
                    )
                })?;
                if toks.len() < 3 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "STATE needs a label and a prior".to_string(),
                    ));
                }
                let (label_col, label) = toks[1];
                if parsed.iter().any(|(_, l, _, _)| l == label) {
                    return Err(Error::parse(
                        line_no,
                        label_col,
                        ParseErrorKind::DuplicateLabel,
                        format!("label '{}' already declared", label),
                    ));
                }
                let (prior_col, prior_tok) = toks[2];
                let prior: f64 = prior_tok.parse().map_err(|_| {
                    Error::parse(
                        line_no,
                        prior_col,
                        ParseErrorKind::Syntax,
                        format!("cannot parse '{}' as a prior", prior_tok),
                    )
                })?;
                if !prior.is_finite() || prior < 0.0 {
                    return Err(Error::parse(
                        line_no,
                        prior_col,
                        ParseErrorKind::Norm,
                        format!("prior must be a finite nonnegative number, got {}", prior_tok),
                    ));
                }
                let expected = da * db;
                let amp_toks = &toks[3..];
                if amp_toks.len() != expected {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Dims,
                        format!(
                            "state '{}' has {} amplitudes, needs {} for {}x{}",
                            label,
                            amp_toks.len(),
                            expected,
                            da,
                            db
                        ),
                    ));
                }
                let mut amps = Vec::with_capacity(expected);
                for (col, tok) in amp_toks {
                    amps.push(parse_complex(line_no, *col, tok)?);
                }
                parsed.push((line_no, label.to_string(), prior, amps));
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    col0,
                    ParseErrorKind::Syntax,
                    format!("unknown directive '{}'", other),
                ));
            }
        }
    }

    let dims = dims.ok_or_else(|| {
        Error::parse(1, 1, ParseErrorKind::Syntax, "file declares no DIMS".to_string())
    })?;
    if parsed.is_empty() {
        return Err(Error::parse(
            1,
            1,
            ParseErrorKind::Syntax,
            "file declares no STATE lines".to_string(),
        ));
    }

    // priors: renormalise small drift, reject anything larger
    let prior_sum: f64 = parsed.iter().map(|(_, _, p, _)| p).sum();
    if (prior_sum - 1.0).abs() > tol::FILE_NORM_TOL {
        let last_line = parsed.last().map(|(l, _, _, _)| *l).unwrap_or(1);
        return Err(Error::parse(
            last_line,
            1,
            ParseErrorKind::Norm,
            format!("priors sum to {}, outside 1 ± {}", prior_sum, tol::FILE_NORM_TOL),
        ));
    }

    let mut members = Vec::with_capacity(parsed.len());
    for (line_no, label, prior, amps) in parsed {
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::FILE_NORM_TOL {
            return Err(Error::parse(
                line_no,
                1,
                ParseErrorKind::Norm,
                format!(
                    "state '{}' has norm {}, outside 1 ± {}",
                    label,
                    norm,
                    tol::FILE_NORM_TOL
                ),
            ));
        }
        let scaled: Vec<Complex64> = amps.into_iter().map(|c| c / norm).collect();
        let state = StateVector::new(scaled, Some(dims)).map_err(|e| {
            Error::parse(line_no, 1, ParseErrorKind::Norm, e.to_string())
        })?;
        members.push(EnsembleMember {
            label,
            state: MemberState::Pure(state),
            prior: prior / prior_sum,
        });
    }
    Ensemble::new("custom", dims, members)
}

fn fmt_complex(c: Complex64) -> String {
    format!("({},{})", c.re, c.im)
}

/// Serialises a pure ensemble back into the file format; parsing the
/// result reproduces the states and priors.
pub fn format_ensemble(ensemble: &Ensemble) -> Result<String> {
    let mut out = String::new();
    let (da, db) = ensemble.dims();
    out.push_str(&format!("# locclab ensemble '{}'\n", ensemble.id()));
    out.push_str(&format!("DIMS {} {}\n", da, db));
    for member in ensemble.members() {
        let psi = member.state.pure().ok_or_else(|| {
            Error::Precondition(format!(
                "member '{}' is mixed; the file format carries pure states only",
                member.label
            ))
        })?;
        out.push_str(&format!("STATE {} {}", member.label, member.prior));
        for amp in psi.amplitudes().iter() {
            out.push(' ');
            out.push_str(&fmt_complex(*amp));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parsed but not yet dimension-bound protocol file.
#[derive(Debug, Clone)]
pub struct ProtocolSpec {
    root: String,
    nodes: BTreeMap<String, NodeSpec>,
    edges: Vec<(String, String, String)>,
}

#[derive(Debug, Clone)]
enum NodeSpec {
    Measure {
        party: Party,
        instrument: InstrumentSpec,
    },
    Leaf {
        guess: Option<String>,
    },
}

#[derive(Debug, Clone)]
enum InstrumentSpec {
    Computational,
    /// Row-major d x d unitary whose columns are measured.
    Basis(Vec<Complex64>),
}

fn parse_party(line_no: usize, col: usize, token: &str) -> Result<Party> {
    match token {
        "A" => Ok(Party::A),
        "B" => Ok(Party::B),
        other => Err(Error::parse(
            line_no,
            col,
            ParseErrorKind::Syntax,
            format!("party must be A or B, got '{}'", other),
        )),
    }
}

/// Parses a protocol file. See the module docs for the grammar.
pub fn parse_protocol(text: &str) -> Result<ProtocolSpec> {
    let mut root: Option<String> = None;
    let mut nodes: BTreeMap<String, NodeSpec> = BTreeMap::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let toks = tokens(line);
        let (col0, directive) = toks[0];
        match directive {
            "NODE" => {
                if toks.len() < 4 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "NODE needs an id, a party and an instrument spec".to_string(),
                    ));
                }
                let (id_col, id) = toks[1];
                if nodes.contains_key(id) {
                    return Err(Error::parse(
                        line_no,
                        id_col,
                        ParseErrorKind::DuplicateLabel,
                        format!("node id '{}' already declared", id),
                    ));
                }
                let party = parse_party(line_no, toks[2].0, toks[2].1)?;
                let (spec_col, spec_tok) = toks[3];
                let instrument = match spec_tok {
                    "COMP" => {
                        if toks.len() != 4 {
                            return Err(Error::parse(
                                line_no,
                                spec_col,
                                ParseErrorKind::Syntax,
                                "COMP takes no arguments".to_string(),
                            ));
                        }
                        InstrumentSpec::Computational
                    }
                    "BASIS" => {
                        let amp_toks = &toks[4..];
                        let d = (amp_toks.len() as f64).sqrt().round() as usize;
                        if d * d != amp_toks.len() || d == 0 {
                            return Err(Error::parse(
                                line_no,
                                spec_col,
                                ParseErrorKind::Dims,
                                format!(
                                    "BASIS needs a square number of amplitudes, got {}",
                                    amp_toks.len()
                                ),
                            ));
                        }
                        let mut amps = Vec::with_capacity(amp_toks.len());
                        for (col, tok) in amp_toks {
                            amps.push(parse_complex(line_no, *col, tok)?);
                        }
                        InstrumentSpec::Basis(amps)
                    }
                    other => {
                        return Err(Error::parse(
                            line_no,
                            spec_col,
                            ParseErrorKind::Syntax,
                            format!("instrument spec must be COMP or BASIS, got '{}'", other),
                        ))
                    }
                };
                root.get_or_insert_with(|| id.to_string());
                nodes.insert(id.to_string(), NodeSpec::Measure { party, instrument });
            }
            "LEAF" => {
                if toks.len() != 3 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "LEAF needs an id and a guess (or -)".to_string(),
                    ));
                }
                let (id_col, id) = toks[1];
                if nodes.contains_key(id) {
                    return Err(Error::parse(
                        line_no,
                        id_col,
                        ParseErrorKind::DuplicateLabel,
                        format!("node id '{}' already declared", id),
                    ));
                }
                let guess = match toks[2].1 {
                    "-" => None,
                    g => Some(g.to_string()),
                };
                root.get_or_insert_with(|| id.to_string());
                nodes.insert(id.to_string(), NodeSpec::Leaf { guess });
            }
            "EDGE" => {
                if toks.len() != 4 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        ParseErrorKind::Syntax,
                        "EDGE needs a parent, an outcome and a child".to_string(),
                    ));
                }
                edges.push((
                    toks[1].1.to_string(),
                    toks[2].1.to_string(),
                    toks[3].1.to_string(),
                ));
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    col0,
                    ParseErrorKind::Syntax,
                    format!("unknown directive '{}'", other),
                ));
            }
        }
    }

    let root = root.ok_or_else(|| {
        Error::parse(
            1,
            1,
            ParseErrorKind::Syntax,
            "file declares no NODE or LEAF lines".to_string(),
        )
    })?;
    Ok(ProtocolSpec { root, nodes, edges })
}

/// Binds a parsed protocol to concrete party dimensions, checking that the
/// edge structure is a tree and that every referenced node exists.
pub fn instantiate_protocol(
    spec: &ProtocolSpec,
    name: &str,
    dims: (usize, usize),
) -> Result<LoccProtocol> {
    let mut children_of: BTreeMap<&str, BTreeMap<String, String>> = BTreeMap::new();
    let mut used_as_child: BTreeMap<&str, usize> = BTreeMap::new();
    for (parent, outcome, child) in &spec.edges {
        if !spec.nodes.contains_key(parent.as_str()) {
            return Err(Error::InvalidProtocol(format!(
                "edge references unknown parent '{}'",
                parent
            )));
        }
        if !spec.nodes.contains_key(child.as_str()) {
            return Err(Error::InvalidProtocol(format!(
                "edge references unknown child '{}'",
                child
            )));
        }
        let slot = children_of.entry(parent).or_default();
        if slot.insert(outcome.clone(), child.clone()).is_some() {
            return Err(Error::InvalidProtocol(format!(
                "parent '{}' has two children for outcome '{}'",
                parent, outcome
            )));
        }
        *used_as_child.entry(child).or_insert(0) += 1;
    }
    for (child, count) in &used_as_child {
        if *count > 1 {
            return Err(Error::InvalidProtocol(format!(
                "node '{}' is a child of several parents",
                child
            )));
        }
    }
    if used_as_child.contains_key(spec.root.as_str()) {
        return Err(Error::InvalidProtocol(format!(
            "root '{}' cannot be a child",
            spec.root
        )));
    }
    for id in spec.nodes.keys() {
        if *id != spec.root && !used_as_child.contains_key(id.as_str()) {
            return Err(Error::InvalidProtocol(format!(
                "node '{}' is unreachable from the root",
                id
            )));
        }
    }

    fn build(
        id: &str,
        dims: (usize, usize),
        nodes: &BTreeMap<String, NodeSpec>,
        children_of: &BTreeMap<&str, BTreeMap<String, String>>,
        depth: usize,
    ) -> Result<ProtocolNode> {
        if depth > tol::DEFAULT_MAX_ROUNDS {
            return Err(Error::InvalidProtocol(
                "protocol file nests deeper than the round bound".into(),
            ));
        }
        match &nodes[id] {
            NodeSpec::Leaf { guess } => {
                if children_of.contains_key(id) {
                    return Err(Error::InvalidProtocol(format!(
                        "leaf '{}' has outgoing edges",
                        id
                    )));
                }
                Ok(ProtocolNode::Leaf {
                    guess: guess.clone(),
                })
            }
            NodeSpec::Measure { party, instrument } => {
                let d = match party {
                    Party::A => dims.0,
                    Party::B => dims.1,
                };
                let instrument = match instrument {
                    InstrumentSpec::Computational => Instrument::computational(d),
                    InstrumentSpec::Basis(amps) => {
                        let side = (amps.len() as f64).sqrt().round() as usize;
                        if side != d {
                            return Err(Error::Precondition(format!(
                                "node '{}' declares a {}x{} basis but party {} has dimension {}",
                                id, side, side, party, d
                            )));
                        }
                        let m = CMatrix::from_row_slice(d, d, amps);
                        Instrument::from_basis(&m).map_err(|e| {
                            Error::Precondition(format!("node '{}': {}", id, e))
                        })?
                    }
                };
                let mut children = BTreeMap::new();
                let edge_children = children_of.get(id).cloned().unwrap_or_default();
                for (outcome, child_id) in &edge_children {
                    children.insert(
                        outcome.clone(),
                        build(child_id, dims, nodes, children_of, depth + 1)?,
                    );
                }
                Ok(ProtocolNode::Measure {
                    party: *party,
                    instrument,
                    children,
                })
            }
        }
    }

    let root = build(&spec.root, dims, &spec.nodes, &children_of, 0)?;
    LoccProtocol::with_default_rounds(name, dims, root)
}
