//! Structure files: a sectioned key/value text format describing charts,
//! Courant structures, matched-pair data, Dirac frames, and regular
//! structure data, together with a canonical printer.
//!
//! A document is line oriented.  `#` starts a comment that runs to the end
//! of the line, blank lines are ignored, `[name]` opens a section, and every
//! other line is an entry `key arg… = value`.  Parsing performs full static
//! validation — every coordinate and frame name must resolve, every
//! expression must parse, and every table must have the declared shape —
//! and reports problems as `Syntax`/`UnknownName` errors whose byte offset
//! points into the original text ([`locate`] converts an offset to a
//! line/column pair).  Validation that depends on algebraic laws rather
//! than on the text (invertibility of a pairing, fiber Jacobi identities,
//! closedness gates) is left to the library builders and surfaces without a
//! location.
//!
//! The same document can feed several commands: the *host* structure is the
//! Courant structure the document describes, and documents with a `[fiber]`,
//! `[complex]`, or flat `[regular]` block additionally describe a matched
//! pair whose sum the host is.  `[dirac]` blocks attach frame data for
//! integrability checks.  [`StructureDocument::render`] prints a canonical
//! form; parsing a rendered document yields an identical document.

use std::collections::HashSet;
use std::fmt::Write as _;

use courant::calculus::{vector_field_to_string, DiffForm, VectorField};
use courant::chart::{is_valid_name, ChartContext};
use courant::complex::{build_complex_matched_pair, ComplexChart};
use courant::connection::Connection;
use courant::courant::{make_twisted_standard, CourantStructure, Section};
use courant::dirac::DiracFrame;
use courant::error::{Error, Result};
use courant::expr::{
    form_to_string, parse_form, parse_poly_row, parse_scalar, parse_scalar_matrix,
    parse_section_coeffs, section_to_string,
};
use courant::matched::{matched_sum, MatchedPairData};
use courant::poly::Polynomial;
use courant::regular::{QuadraticLieBundle, RegularData};
use courant::scalar::{Scalar, ScalarField};

/// A fully parsed and statically validated structure file.
#[derive(Debug)]
pub struct StructureDocument {
    chart: ChartContext,
    complex: Option<ComplexBlock>,
    twist: Option<DiffForm>,
    raw: Option<CourantStructure>,
    fiber: Option<FiberBlock>,
    regular: Option<RegularData>,
    dirac: Option<DiracBlock>,
    dirac_left: Option<DiracBlock>,
    dirac_right: Option<DiracBlock>,
}

/// Complex decomposition data: holomorphic names and a twist form.
#[derive(Debug)]
pub struct ComplexBlock {
    pub chart: ComplexChart,
    pub twist: DiffForm,
}

#[derive(Debug)]
struct FiberBlock {
    labels: Vec<String>,
    pairing: Vec<Vec<Scalar>>,
    /// `bracket[a][b]` = fiber bracket table (zero-anchor Courant bracket on
    /// the fiber component), as sections over the fiber labels.
    bracket: Vec<Vec<Section>>,
    /// `action[i][a]` = value of the connection along host frame index `i`
    /// applied to fiber label `a`, as a section over the fiber labels.
    action: Vec<Vec<Section>>,
    /// `coaction[a][i]` = value of the counter-connection along fiber label
    /// `a` applied to host frame index `i`, as a section over the host frame.
    coaction: Vec<Vec<Section>>,
}

/// Spanning/complement frame data, stored as coefficient vectors over the
/// frame the block is scoped to.
#[derive(Debug)]
struct DiracBlock {
    span: Vec<Vec<Polynomial>>,
    complement: Vec<Vec<Polynomial>>,
}

/// Convert a byte offset into 1-based `(line, column)` coordinates.
pub fn locate(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in text.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Render an error for display, attaching `line:column` coordinates when the
/// error carries an offset into `text`.
pub fn describe_error(text: &str, err: &Error) -> String {
    match err {
        Error::Syntax { offset, message } => {
            let (line, col) = locate(text, *offset);
            format!("line {line}, column {col}: {message}")
        }
        Error::UnknownName { offset, name } => {
            let (line, col) = locate(text, *offset);
            format!("line {line}, column {col}: unknown name `{name}`")
        }
        other => other.to_string(),
    }
}

fn syn(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

/// Shift the offsets of expression-level errors so they point into the
/// whole document rather than into the extracted value string.
fn relocate(err: Error, base: usize) -> Error {
    match err {
        Error::Syntax { offset, message } => Error::Syntax { offset: base + offset, message },
        Error::UnknownName { offset, name } => Error::UnknownName { offset: base + offset, name },
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Raw line structure
// ---------------------------------------------------------------------------

struct Entry {
    key_offset: usize,
    key: String,
    /// Arguments between the key and the `=`, each with its byte offset.
    args: Vec<(usize, String)>,
    value_offset: usize,
    value: String,
}

struct Block {
    name: String,
    header_offset: usize,
    entries: Vec<Entry>,
}

const SECTION_NAMES: &[&str] = &[
    "chart", "complex", "twist", "structure", "fiber", "regular", "dirac", "dirac-left",
    "dirac-right",
];

fn split_blocks(text: &str) -> Result<Vec<Block>> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut offset = 0;
    for raw_line in text.split('\n') {
        let line_offset = offset;
        offset += raw_line.len() + 1;
        let content = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let trimmed = content.trim_end();
        let lead = trimmed.len() - trimmed.trim_start().len();
        let body = trimmed.trim_start();
        if body.is_empty() {
            continue;
        }
        let body_offset = line_offset + lead;
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                syn(body_offset, "section header is missing the closing `]`")
            })?;
            if !SECTION_NAMES.contains(&name) {
                return Err(syn(body_offset + 1, format!("unknown section `[{name}]`")));
            }
            if blocks.iter().any(|b| b.name == name) {
                return Err(syn(body_offset + 1, format!("duplicate section `[{name}]`")));
            }
            blocks.push(Block {
                name: name.to_string(),
                header_offset: body_offset,
                entries: Vec::new(),
            });
            continue;
        }
        let eq = body.find('=').ok_or_else(|| {
            syn(body_offset, "expected `key = value` or a `[section]` header")
        })?;
        let lhs = &body[..eq];
        let mut words = Vec::new();
        let mut i = 0;
        for w in lhs.split_whitespace() {
            let pos = body[i..eq].find(w).map(|p| i + p).unwrap_or(i);
            words.push((body_offset + pos, w.to_string()));
            i = pos + w.len();
        }
        if words.is_empty() {
            return Err(syn(body_offset, "entry is missing a key before `=`"));
        }
        let value_rel = body[eq + 1..]
            .find(|c: char| !c.is_whitespace())
            .map(|p| eq + 1 + p)
            .unwrap_or(body.len());
        let entry = Entry {
            key_offset: words[0].0,
            key: words[0].1.clone(),
            args: words[1..].to_vec(),
            value_offset: body_offset + value_rel,
            value: body[value_rel..].trim_end().to_string(),
        };
        let block = blocks.last_mut().ok_or_else(|| {
            syn(body_offset, "entry appears before any `[section]` header")
        })?;
        block.entries.push(entry);
    }
    Ok(blocks)
}

// ---------------------------------------------------------------------------
// Per-block readers
// ---------------------------------------------------------------------------

/// Entries of one block, with unknown-key rejection and at-most-once lookup.
struct Reader<'a> {
    block: &'a Block,
}

impl<'a> Reader<'a> {
    fn new(block: &'a Block, keys: &[&str]) -> Result<Self> {
        for e in &block.entries {
            if !keys.contains(&e.key.as_str()) {
                return Err(syn(
                    e.key_offset,
                    format!("unknown key `{}` in [{}] section", e.key, block.name),
                ));
            }
        }
        Ok(Reader { block })
    }

    /// The unique entry for `key`, which must take no arguments.
    fn single(&self, key: &str) -> Result<Option<&'a Entry>> {
        let mut found = None;
        for e in &self.block.entries {
            if e.key == key {
                if found.is_some() {
                    return Err(syn(e.key_offset, format!("duplicate `{key}` entry")));
                }
                if !e.args.is_empty() {
                    return Err(syn(e.args[0].0, format!("`{key}` takes no arguments")));
                }
                found = Some(e);
            }
        }
        Ok(found)
    }

    fn required(&self, key: &str) -> Result<&'a Entry> {
        self.single(key)?.ok_or_else(|| {
            syn(
                self.block.header_offset,
                format!("[{}] section is missing the `{key}` entry", self.block.name),
            )
        })
    }

    /// All entries for `key`, each with exactly `nargs` arguments.
    fn table(&self, key: &str, nargs: usize) -> Result<Vec<&'a Entry>> {
        let mut out = Vec::new();
        for e in &self.block.entries {
            if e.key == key {
                if e.args.len() != nargs {
                    return Err(syn(
                        e.key_offset,
                        format!(
                            "`{key}` takes {nargs} argument{} before `=`, found {}",
                            if nargs == 1 { "" } else { "s" },
                            e.args.len()
                        ),
                    ));
                }
                out.push(e);
            }
        }
        Ok(out)
    }
}

/// Split a comma-separated name list, keeping per-name offsets.  An empty
/// value yields an empty list.
fn parse_name_list(entry: &Entry) -> Result<Vec<(usize, String)>> {
    if entry.value.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut names = Vec::new();
    let mut pos = 0;
    for piece in entry.value.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let name = piece.trim();
        let off = entry.value_offset + pos + lead;
        if name.is_empty() {
            return Err(syn(off, "empty name in list"));
        }
        if !is_valid_name(name) {
            return Err(syn(off, format!("invalid name `{name}`")));
        }
        names.push((off, name.to_string()));
        pos += piece.len() + 1;
    }
    for (k, (off, name)) in names.iter().enumerate() {
        if names[..k].iter().any(|(_, n)| n == name) {
            return Err(syn(*off, format!("duplicate name `{name}`")));
        }
    }
    Ok(names)
}

/// Split a `;`-separated list of expression strings with per-item offsets.
fn split_semicolon_list(entry: &Entry) -> Result<Vec<(usize, String)>> {
    let mut items = Vec::new();
    let mut pos = 0;
    for piece in entry.value.split(';') {
        let lead = piece.len() - piece.trim_start().len();
        let item = piece.trim();
        let off = entry.value_offset + pos + lead;
        if item.is_empty() {
            return Err(syn(off, "empty item in `;`-separated list"));
        }
        items.push((off, item.to_string()));
        pos += piece.len() + 1;
    }
    Ok(items)
}

/// Parse a square symmetric scalar matrix value of the given dimension.
fn parse_pairing(chart: &ChartContext, entry: &Entry, dim: usize) -> Result<Vec<Vec<Scalar>>> {
    let m = parse_scalar_matrix(chart, &entry.value).map_err(|e| relocate(e, entry.value_offset))?;
    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
        return Err(syn(
            entry.value_offset,
            format!("expected a {dim}x{dim} matrix for {dim} labels"),
        ));
    }
    for i in 0..dim {
        for j in 0..dim {
            if m[i][j] != m[j][i] {
                return Err(syn(entry.value_offset, "pairing matrix is not symmetric"));
            }
        }
    }
    Ok(m)
}

fn resolve_label(labels: &[String], arg: &(usize, String)) -> Result<usize> {
    labels.iter().position(|l| *l == arg.1).ok_or(Error::UnknownName {
        offset: arg.0,
        name: arg.1.clone(),
    })
}

fn parse_dirac_block(
    chart: &ChartContext,
    block: &Block,
    labels: &[String],
) -> Result<DiracBlock> {
    let r = Reader::new(block, &["span", "complement"])?;
    let parse_list = |entry: &Entry| -> Result<Vec<Vec<Polynomial>>> {
        split_semicolon_list(entry)?
            .into_iter()
            .map(|(off, text)| {
                parse_section_coeffs(chart, labels, &text).map_err(|e| relocate(e, off))
            })
            .collect()
    };
    let span_entry = r.required("span")?;
    let span = parse_list(span_entry)?;
    let complement = parse_list(r.required("complement")?)?;
    if span.len() != complement.len() {
        return Err(syn(
            span_entry.value_offset,
            format!(
                "span lists {} sections but the complement lists {}",
                span.len(),
                complement.len()
            ),
        ));
    }
    if 2 * span.len() != labels.len() {
        return Err(syn(
            span_entry.value_offset,
            format!(
                "span lists {} sections for a frame of rank {}; expected {}",
                span.len(),
                labels.len(),
                labels.len() / 2
            ),
        ));
    }
    Ok(DiracBlock { span, complement })
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

impl StructureDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let blocks = split_blocks(text)?;
        let find = |name: &str| blocks.iter().find(|b| b.name == name);

        // Section compatibility.
        let complex_block = find("complex");
        if let Some(cb) = complex_block {
            for other in &blocks {
                if other.name != "complex" {
                    return Err(syn(
                        other.header_offset,
                        format!(
                            "[{}] cannot be combined with [complex]; the complex \
                             decomposition defines the whole document",
                            other.name
                        ),
                    ));
                }
            }
            let _ = cb;
        }
        for (a, b) in [
            ("structure", "twist"),
            ("structure", "regular"),
            ("regular", "twist"),
            ("regular", "fiber"),
            ("regular", "dirac"),
            ("regular", "dirac-left"),
            ("regular", "dirac-right"),
        ] {
            if find(a).is_some() {
                if let Some(blk) = find(b) {
                    return Err(syn(
                        blk.header_offset,
                        format!("[{b}] cannot be combined with [{a}]"),
                    ));
                }
            }
        }
        for side in ["dirac-left", "dirac-right"] {
            if let Some(blk) = find(side) {
                if find("fiber").is_none() {
                    return Err(syn(
                        blk.header_offset,
                        format!("[{side}] requires a [fiber] section defining a matched pair"),
                    ));
                }
            }
        }
        match (find("dirac-left"), find("dirac-right")) {
            (Some(_), None) => {
                return Err(syn(
                    find("dirac-left").unwrap().header_offset,
                    "[dirac-left] requires a matching [dirac-right] section",
                ))
            }
            (None, Some(blk)) => {
                return Err(syn(
                    blk.header_offset,
                    "[dirac-right] requires a matching [dirac-left] section",
                ))
            }
            _ => {}
        }

        // Chart resolution: [complex] derives its chart from the holomorphic
        // names; otherwise [chart] is required.
        let (chart, complex) = if let Some(block) = complex_block {
            let r = Reader::new(block, &["holomorphic", "twist"])?;
            let names = parse_name_list(r.required("holomorphic")?)?;
            let refs: Vec<&str> = names.iter().map(|(_, n)| n.as_str()).collect();
            let cx = ComplexChart::new(&refs)?;
            let twist = match r.single("twist")? {
                Some(e) => {
                    parse_form(cx.context(), 3, &e.value).map_err(|er| relocate(er, e.value_offset))?
                }
                None => DiffForm::zero(cx.context().dim(), 3),
            };
            let chart = cx.context().clone();
            (chart, Some(ComplexBlock { chart: cx, twist }))
        } else {
            let block = find("chart").ok_or_else(|| {
                syn(0, "missing [chart] section (or a [complex] section deriving one)")
            })?;
            let r = Reader::new(block, &["field", "names"])?;
            let field = match r.single("field")? {
                None => ScalarField::Rational,
                Some(e) => match e.value.as_str() {
                    "rational" => ScalarField::Rational,
                    "gaussian" => ScalarField::GaussianRational,
                    other => {
                        return Err(syn(
                            e.value_offset,
                            format!("unknown field `{other}`; expected `rational` or `gaussian`"),
                        ))
                    }
                },
            };
            let names = parse_name_list(r.required("names")?)?;
            let refs: Vec<&str> = names.iter().map(|(_, n)| n.as_str()).collect();
            (ChartContext::new(&refs, field)?, None)
        };

        // Optional standard-host twist.
        let twist = match find("twist") {
            Some(block) => {
                let r = Reader::new(block, &["form"])?;
                let e = r.required("form")?;
                let w = parse_form(&chart, 3, &e.value).map_err(|er| relocate(er, e.value_offset))?;
                if w.is_zero() {
                    None
                } else {
                    Some(w)
                }
            }
            None => None,
        };

        // Raw Courant structure.
        let raw = match find("structure") {
            Some(block) => Some(Self::parse_structure(&chart, block)?),
            None => None,
        };

        // Host frame labels are known statically for every document kind.
        let base_labels: Vec<String> = match &raw {
            Some(e) => e.labels().to_vec(),
            None => standard_labels(&chart),
        };

        let fiber = match find("fiber") {
            Some(block) => Some(Self::parse_fiber(&chart, block, &base_labels)?),
            None => None,
        };

        let regular = match find("regular") {
            Some(block) => Some(Self::parse_regular(&chart, block)?),
            None => None,
        };

        let host_labels: Vec<String> = match (&regular, &fiber) {
            (Some(data), _) => {
                let mut l = standard_labels(&chart);
                l.extend(data.lie().labels().iter().cloned());
                l
            }
            (None, Some(fb)) => {
                let mut l = base_labels.clone();
                l.extend(fb.labels.iter().cloned());
                l
            }
            (None, None) => base_labels.clone(),
        };

        let dirac = match find("dirac") {
            Some(block) => Some(parse_dirac_block(&chart, block, &host_labels)?),
            None => None,
        };
        let dirac_left = match find("dirac-left") {
            Some(block) => Some(parse_dirac_block(&chart, block, &base_labels)?),
            None => None,
        };
        let dirac_right = match find("dirac-right") {
            Some(block) => {
                let fb = fiber.as_ref().expect("checked above");
                Some(parse_dirac_block(&chart, block, &fb.labels)?)
            }
            None => None,
        };

        Ok(StructureDocument {
            chart,
            complex,
            twist,
            raw,
            fiber,
            regular,
            dirac,
            dirac_left,
            dirac_right,
        })
    }

    fn parse_structure(chart: &ChartContext, block: &Block) -> Result<CourantStructure> {
        let r = Reader::new(block, &["labels", "pairing", "anchor", "bracket"])?;
        let labels = parse_name_list(r.required("labels")?)?;
        for (off, name) in &labels {
            if chart.index_of(name).is_some() {
                return Err(syn(*off, format!("label `{name}` collides with a coordinate name")));
            }
        }
        let names: Vec<String> = labels.iter().map(|(_, n)| n.clone()).collect();
        let rank = names.len();
        let n = chart.dim();
        let pairing = parse_pairing(chart, r.required("pairing")?, rank)?;
        let mut anchor = vec![VectorField::zero(n); rank];
        let mut seen = HashSet::new();
        for e in r.table("anchor", 1)? {
            let k = resolve_label(&names, &e.args[0])?;
            if !seen.insert(k) {
                return Err(syn(e.key_offset, format!("duplicate anchor entry for `{}`", e.args[0].1)));
            }
            let row = parse_poly_row(chart, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            if row.len() != n {
                return Err(syn(
                    e.value_offset,
                    format!("anchor value lists {} components for a {n}-dimensional chart", row.len()),
                ));
            }
            anchor[k] = VectorField::from_components(row);
        }
        let mut bracket = vec![vec![Section::zero(n, rank); rank]; rank];
        let mut seen = HashSet::new();
        for e in r.table("bracket", 2)? {
            let a = resolve_label(&names, &e.args[0])?;
            let b = resolve_label(&names, &e.args[1])?;
            if !seen.insert((a, b)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate bracket entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs =
                parse_section_coeffs(chart, &names, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            bracket[a][b] = Section::from_coeffs(coeffs);
        }
        CourantStructure::new(chart.clone(), names, pairing, anchor, bracket)
    }

    fn parse_fiber(
        chart: &ChartContext,
        block: &Block,
        base_labels: &[String],
    ) -> Result<FiberBlock> {
        let r = Reader::new(block, &["labels", "pairing", "bracket", "action", "coaction"])?;
        let labels = parse_name_list(r.required("labels")?)?;
        for (off, name) in &labels {
            if chart.index_of(name).is_some() {
                return Err(syn(*off, format!("label `{name}` collides with a coordinate name")));
            }
            if base_labels.contains(name) {
                return Err(syn(*off, format!("label `{name}` collides with a host frame label")));
            }
        }
        let names: Vec<String> = labels.iter().map(|(_, n)| n.clone()).collect();
        let m = names.len();
        let n = chart.dim();
        let pairing = parse_pairing(chart, r.required("pairing")?, m)?;
        let mut bracket = vec![vec![Section::zero(n, m); m]; m];
        let mut seen = HashSet::new();
        for e in r.table("bracket", 2)? {
            let a = resolve_label(&names, &e.args[0])?;
            let b = resolve_label(&names, &e.args[1])?;
            if !seen.insert((a, b)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate bracket entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs =
                parse_section_coeffs(chart, &names, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            bracket[a][b] = Section::from_coeffs(coeffs);
        }
        let mut action = vec![vec![Section::zero(n, m); m]; base_labels.len()];
        let mut seen = HashSet::new();
        for e in r.table("action", 2)? {
            let i = resolve_label(base_labels, &e.args[0])?;
            let a = resolve_label(&names, &e.args[1])?;
            if !seen.insert((i, a)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate action entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs =
                parse_section_coeffs(chart, &names, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            action[i][a] = Section::from_coeffs(coeffs);
        }
        let mut coaction = vec![vec![Section::zero(n, base_labels.len()); base_labels.len()]; m];
        let mut seen = HashSet::new();
        for e in r.table("coaction", 2)? {
            let a = resolve_label(&names, &e.args[0])?;
            let i = resolve_label(base_labels, &e.args[1])?;
            if !seen.insert((a, i)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate coaction entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs = parse_section_coeffs(chart, base_labels, &e.value)
                .map_err(|er| relocate(er, e.value_offset))?;
            coaction[a][i] = Section::from_coeffs(coeffs);
        }
        Ok(FiberBlock { labels: names, pairing, bracket, action, coaction })
    }

    fn parse_regular(chart: &ChartContext, block: &Block) -> Result<RegularData> {
        let r = Reader::new(block, &["labels", "kappa", "bracket", "nabla", "r", "twist", "lambda"])?;
        let labels = parse_name_list(r.required("labels")?)?;
        for (off, name) in &labels {
            if chart.index_of(name).is_some() {
                return Err(syn(*off, format!("label `{name}` collides with a coordinate name")));
            }
        }
        let names: Vec<String> = labels.iter().map(|(_, n)| n.clone()).collect();
        let m = names.len();
        let n = chart.dim();
        let kappa = parse_pairing(chart, r.required("kappa")?, m)?;

        let mut structure = vec![vec![vec![Scalar::zero(); m]; m]; m];
        let mut seen = HashSet::new();
        for e in r.table("bracket", 2)? {
            let a = resolve_label(&names, &e.args[0])?;
            let b = resolve_label(&names, &e.args[1])?;
            if !seen.insert((a, b)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate bracket entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs =
                parse_section_coeffs(chart, &names, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            for (k, c) in coeffs.iter().enumerate() {
                structure[a][b][k] = c.as_constant().ok_or_else(|| {
                    syn(e.value_offset, "structure constants must be constant sections")
                })?;
            }
        }

        let coord = |arg: &(usize, String)| -> Result<usize> {
            chart.index_of(&arg.1).ok_or(Error::UnknownName { offset: arg.0, name: arg.1.clone() })
        };
        let mut nabla = vec![vec![Section::zero(n, m); m]; n];
        let mut seen = HashSet::new();
        for e in r.table("nabla", 2)? {
            let i = coord(&e.args[0])?;
            let a = resolve_label(&names, &e.args[1])?;
            if !seen.insert((i, a)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate nabla entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs =
                parse_section_coeffs(chart, &names, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            nabla[i][a] = Section::from_coeffs(coeffs);
        }

        let mut r_form = vec![vec![Section::zero(n, m); n]; n];
        let mut seen = HashSet::new();
        for e in r.table("r", 2)? {
            let i = coord(&e.args[0])?;
            let j = coord(&e.args[1])?;
            if !seen.insert((i, j)) {
                return Err(syn(
                    e.key_offset,
                    format!("duplicate r entry for `{} {}`", e.args[0].1, e.args[1].1),
                ));
            }
            let coeffs =
                parse_section_coeffs(chart, &names, &e.value).map_err(|er| relocate(er, e.value_offset))?;
            r_form[i][j] = Section::from_coeffs(coeffs);
        }

        let twist = match r.single("twist")? {
            Some(e) => parse_form(chart, 3, &e.value).map_err(|er| relocate(er, e.value_offset))?,
            None => DiffForm::zero(n, 3),
        };
        let lambda = match r.single("lambda")? {
            Some(e) => parse_scalar(chart, &e.value).map_err(|er| relocate(er, e.value_offset))?,
            None => Scalar::from_int(2),
        };

        let lie = QuadraticLieBundle::new(names, kappa, structure)?;
        RegularData::new(chart.clone(), lie, nabla, r_form, twist, lambda)
    }

    // -- accessors ----------------------------------------------------------

    pub fn chart(&self) -> &ChartContext {
        &self.chart
    }

    pub fn complex(&self) -> Option<&ComplexBlock> {
        self.complex.as_ref()
    }

    pub fn regular(&self) -> Option<&RegularData> {
        self.regular.as_ref()
    }

    pub fn has_dirac(&self) -> bool {
        self.dirac.is_some()
    }

    pub fn has_dirac_pair(&self) -> bool {
        self.dirac_left.is_some()
    }

    /// Does the document describe a matched pair (beyond the bare host)?
    pub fn describes_pair(&self) -> bool {
        self.fiber.is_some() || self.complex.is_some() || self.regular.is_some()
    }

    // -- builders -----------------------------------------------------------

    /// The base host structure, ignoring any fiber extension: the raw
    /// `[structure]` if present, else the (twisted) standard structure.
    fn base_host(&self, force: bool) -> Result<CourantStructure> {
        if let Some(e) = &self.raw {
            return Ok(e.clone());
        }
        let zero = DiffForm::zero(self.chart.dim(), 3);
        let h = self.twist.as_ref().unwrap_or(&zero);
        make_twisted_standard(&self.chart, h, force)
    }

    /// The Courant structure the document describes.  `force` bypasses
    /// integrability gates (a non-closed twist, inconsistent regular data).
    pub fn host(&self, force: bool) -> Result<CourantStructure> {
        if let Some(cx) = &self.complex {
            return matched_sum(&build_complex_matched_pair(&cx.chart, &cx.twist)?);
        }
        if let Some(data) = &self.regular {
            return courant::regular::build_regular(data, force);
        }
        if self.fiber.is_some() {
            return matched_sum(&self.matched_pair(force)?);
        }
        self.base_host(force)
    }

    /// The matched pair the document describes, if it describes one.
    pub fn matched_pair(&self, force: bool) -> Result<MatchedPairData> {
        if let Some(cx) = &self.complex {
            return build_complex_matched_pair(&cx.chart, &cx.twist);
        }
        if let Some(data) = &self.regular {
            return courant::regular::flat_to_matched_pair(data);
        }
        if let Some(fb) = &self.fiber {
            let base = self.base_host(force)?;
            let n = self.chart.dim();
            let right = CourantStructure::new(
                self.chart.clone(),
                fb.labels.clone(),
                fb.pairing.clone(),
                vec![VectorField::zero(n); fb.labels.len()],
                fb.bracket.clone(),
            )?;
            return MatchedPairData::new(
                base,
                right,
                Connection::new(fb.action.clone()),
                Connection::new(fb.coaction.clone()),
            );
        }
        Err(Error::IncompatibleData(
            "this document does not describe a matched pair; add a [fiber], [complex], \
             or [regular] section"
                .into(),
        ))
    }

    fn frame_from_block(block: &DiracBlock, host: &CourantStructure) -> Result<DiracFrame> {
        let sections = block.span.iter().map(|c| Section::from_coeffs(c.clone())).collect();
        let complement = block.complement.iter().map(|c| Section::from_coeffs(c.clone())).collect();
        DiracFrame::new(host, sections, complement)
    }

    /// The `[dirac]` frame, interpreted in the given host structure.
    pub fn dirac_frame(&self, host: &CourantStructure) -> Result<DiracFrame> {
        let block = self.dirac.as_ref().ok_or_else(|| {
            Error::IncompatibleData("this document has no [dirac] section".into())
        })?;
        Self::frame_from_block(block, host)
    }

    /// The `[dirac-left]`/`[dirac-right]` frames, interpreted in the
    /// components of the given matched pair.
    pub fn dirac_pair_frames(&self, pair: &MatchedPairData) -> Result<(DiracFrame, DiracFrame)> {
        let (left, right) = match (&self.dirac_left, &self.dirac_right) {
            (Some(l), Some(r)) => (l, r),
            _ => {
                return Err(Error::IncompatibleData(
                    "this document has no [dirac-left]/[dirac-right] sections".into(),
                ))
            }
        };
        Ok((
            Self::frame_from_block(left, &pair.left)?,
            Self::frame_from_block(right, &pair.right)?,
        ))
    }

    // -- canonical rendering ------------------------------------------------

    /// Print the canonical form of the document.  Parsing the output yields
    /// a document that renders identically (round trip).
    pub fn render(&self) -> String {
        let chart = &self.chart;
        let mut out = String::new();
        if let Some(cx) = &self.complex {
            let _ = writeln!(out, "[complex]");
            let hol = &chart.names()[..cx.chart.dim()];
            let _ = writeln!(out, "holomorphic = {}", hol.join(", "));
            if !cx.twist.is_zero() {
                let _ = writeln!(out, "twist = {}", form_to_string(chart, &cx.twist));
            }
            return out;
        }
        let _ = writeln!(out, "[chart]");
        let _ = writeln!(out, "field = {}", match chart.field() {
            ScalarField::Rational => "rational",
            ScalarField::GaussianRational => "gaussian",
        });
        let _ = writeln!(out, "names = {}", chart.names().join(", "));
        if let Some(h) = &self.twist {
            let _ = writeln!(out);
            let _ = writeln!(out, "[twist]");
            let _ = writeln!(out, "form = {}", form_to_string(chart, h));
        }
        if let Some(e) = &self.raw {
            let _ = writeln!(out);
            let _ = writeln!(out, "[structure]");
            let _ = writeln!(out, "labels = {}", e.labels().join(", "));
            let _ = writeln!(out, "pairing = {}", matrix_to_string(e.pairing_matrix()));
            for (k, label) in e.labels().iter().enumerate() {
                let rho = &e.anchor_table()[k];
                if !rho.is_zero() {
                    let _ = writeln!(out, "anchor {label} = {}", vector_field_to_string(chart, rho));
                }
            }
            for (a, la) in e.labels().iter().enumerate() {
                for (b, lb) in e.labels().iter().enumerate() {
                    let s = e.bracket_entry(a, b);
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "bracket {la} {lb} = {}",
                            section_to_string(chart, e.labels(), s.coeffs())
                        );
                    }
                }
            }
        }
        if let Some(fb) = &self.fiber {
            let base_labels: Vec<String> = match &self.raw {
                Some(e) => e.labels().to_vec(),
                None => standard_labels(chart),
            };
            let _ = writeln!(out);
            let _ = writeln!(out, "[fiber]");
            let _ = writeln!(out, "labels = {}", fb.labels.join(", "));
            let _ = writeln!(out, "pairing = {}", matrix_to_string(&fb.pairing));
            for (a, row) in fb.bracket.iter().enumerate() {
                for (b, s) in row.iter().enumerate() {
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "bracket {} {} = {}",
                            fb.labels[a],
                            fb.labels[b],
                            section_to_string(chart, &fb.labels, s.coeffs())
                        );
                    }
                }
            }
            for (i, row) in fb.action.iter().enumerate() {
                for (a, s) in row.iter().enumerate() {
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "action {} {} = {}",
                            base_labels[i],
                            fb.labels[a],
                            section_to_string(chart, &fb.labels, s.coeffs())
                        );
                    }
                }
            }
            for (a, row) in fb.coaction.iter().enumerate() {
                for (i, s) in row.iter().enumerate() {
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "coaction {} {} = {}",
                            fb.labels[a],
                            base_labels[i],
                            section_to_string(chart, &base_labels, s.coeffs())
                        );
                    }
                }
            }
        }
        if let Some(data) = &self.regular {
            let lie = data.lie();
            let labels = lie.labels();
            let _ = writeln!(out);
            let _ = writeln!(out, "[regular]");
            let _ = writeln!(out, "labels = {}", labels.join(", "));
            let _ = writeln!(out, "kappa = {}", matrix_to_string(lie.kappa()));
            for (a, la) in labels.iter().enumerate() {
                for (b, lb) in labels.iter().enumerate() {
                    let s = lie.frame_bracket(chart.dim(), a, b);
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "bracket {la} {lb} = {}",
                            section_to_string(chart, labels, s.coeffs())
                        );
                    }
                }
            }
            for i in 0..chart.dim() {
                for (a, la) in labels.iter().enumerate() {
                    let s = data.nabla(&VectorField::coordinate(chart.dim(), i), &Section::basis(chart.dim(), labels.len(), a));
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "nabla {} {la} = {}",
                            chart.name(i),
                            section_to_string(chart, labels, s.coeffs())
                        );
                    }
                }
            }
            for i in 0..chart.dim() {
                for j in 0..chart.dim() {
                    let s = data.r_of(
                        &VectorField::coordinate(chart.dim(), i),
                        &VectorField::coordinate(chart.dim(), j),
                    );
                    if !s.is_zero() {
                        let _ = writeln!(
                            out,
                            "r {} {} = {}",
                            chart.name(i),
                            chart.name(j),
                            section_to_string(chart, labels, s.coeffs())
                        );
                    }
                }
            }
            if !data.twist().is_zero() {
                let _ = writeln!(out, "twist = {}", form_to_string(chart, data.twist()));
            }
            let _ = writeln!(out, "lambda = {}", data.lambda());
        }
        let dirac_scope: Vec<String> = {
            let base: Vec<String> = match &self.raw {
                Some(e) => e.labels().to_vec(),
                None => standard_labels(chart),
            };
            match &self.fiber {
                Some(fb) => base.iter().chain(fb.labels.iter()).cloned().collect(),
                None => base,
            }
        };
        let write_dirac = |out: &mut String, name: &str, block: &DiracBlock, labels: &[String]| {
            let _ = writeln!(out);
            let _ = writeln!(out, "[{name}]");
            let join = |rows: &[Vec<Polynomial>]| {
                rows.iter()
                    .map(|c| section_to_string(chart, labels, c))
                    .collect::<Vec<_>>()
                    .join(" ; ")
            };
            let _ = writeln!(out, "span = {}", join(&block.span));
            let _ = writeln!(out, "complement = {}", join(&block.complement));
        };
        if let Some(block) = &self.dirac {
            write_dirac(&mut out, "dirac", block, &dirac_scope);
        }
        if let Some(block) = &self.dirac_left {
            let base: Vec<String> = match &self.raw {
                Some(e) => e.labels().to_vec(),
                None => standard_labels(chart),
            };
            write_dirac(&mut out, "dirac-left", block, &base);
        }
        if let Some(block) = &self.dirac_right {
            let fb = self.fiber.as_ref().expect("dirac-right implies fiber");
            write_dirac(&mut out, "dirac-right", block, &fb.labels);
        }
        out
    }
}

/// Frame labels of the (twisted) standard structure over a chart: vector
/// labels `e_<name>` followed by covector labels `d_<name>`.
pub fn standard_labels(chart: &ChartContext) -> Vec<String> {
    let mut labels = Vec::with_capacity(2 * chart.dim());
    for name in chart.names() {
        labels.push(format!("e_{name}"));
    }
    for name in chart.names() {
        labels.push(format!("d_{name}"));
    }
    labels
}

fn matrix_to_string(m: &[Vec<Scalar>]) -> String {
    if m.is_empty() {
        return "[]".to_string();
    }
    let rows: Vec<String> = m
        .iter()
        .map(|row| row.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Render an arbitrary Courant structure as a raw-structure document.
pub fn document_for_structure(e: &CourantStructure) -> String {
    let chart = e.chart();
    let mut out = String::new();
    let _ = writeln!(out, "[chart]");
    let _ = writeln!(out, "field = {}", match chart.field() {
        ScalarField::Rational => "rational",
        ScalarField::GaussianRational => "gaussian",
    });
    let _ = writeln!(out, "names = {}", chart.names().join(", "));
    let _ = writeln!(out);
    let _ = writeln!(out, "[structure]");
    let _ = writeln!(out, "labels = {}", e.labels().join(", "));
    let _ = writeln!(out, "pairing = {}", matrix_to_string(e.pairing_matrix()));
    for (k, label) in e.labels().iter().enumerate() {
        let rho = &e.anchor_table()[k];
        if !rho.is_zero() {
            let _ = writeln!(out, "anchor {label} = {}", vector_field_to_string(chart, rho));
        }
    }
    for (a, la) in e.labels().iter().enumerate() {
        for (b, lb) in e.labels().iter().enumerate() {
            let s = e.bracket_entry(a, b);
            if !s.is_zero() {
                let _ = writeln!(
                    out,
                    "bracket {la} {lb} = {}",
                    section_to_string(chart, e.labels(), s.coeffs())
                );
            }
        }
    }
    out
}

/// Render a matched pair whose left component is a (twisted) standard
/// structure and whose right component has zero anchor as a
/// `[chart]`/`[twist]`/`[fiber]` document reproducing it exactly.
pub fn document_for_fiber_pair(pair: &MatchedPairData, twist: &DiffForm) -> String {
    let chart = pair.left.chart();
    let mut out = String::new();
    let _ = writeln!(out, "[chart]");
    let _ = writeln!(out, "field = {}", match chart.field() {
        ScalarField::Rational => "rational",
        ScalarField::GaussianRational => "gaussian",
    });
    let _ = writeln!(out, "names = {}", chart.names().join(", "));
    if !twist.is_zero() {
        let _ = writeln!(out);
        let _ = writeln!(out, "[twist]");
        let _ = writeln!(out, "form = {}", form_to_string(chart, twist));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "[fiber]");
    let fiber_labels = pair.right.labels();
    let base_labels = pair.left.labels();
    let _ = writeln!(out, "labels = {}", fiber_labels.join(", "));
    let _ = writeln!(out, "pairing = {}", matrix_to_string(pair.right.pairing_matrix()));
    for (a, la) in fiber_labels.iter().enumerate() {
        for (b, lb) in fiber_labels.iter().enumerate() {
            let s = pair.right.bracket_entry(a, b);
            if !s.is_zero() {
                let _ = writeln!(
                    out,
                    "bracket {la} {lb} = {}",
                    section_to_string(chart, fiber_labels, s.coeffs())
                );
            }
        }
    }
    for (i, label) in base_labels.iter().enumerate() {
        for (a, fl) in fiber_labels.iter().enumerate() {
            let s = pair.right_action.entry(i, a);
            if !s.is_zero() {
                let _ = writeln!(
                    out,
                    "action {label} {fl} = {}",
                    section_to_string(chart, fiber_labels, s.coeffs())
                );
            }
        }
    }
    for (a, fl) in fiber_labels.iter().enumerate() {
        for (i, label) in base_labels.iter().enumerate() {
            let s = pair.left_action.entry(a, i);
            if !s.is_zero() {
                let _ = writeln!(
                    out,
                    "coaction {fl} {label} = {}",
                    section_to_string(chart, base_labels, s.coeffs())
                );
            }
        }
    }
    out
}
