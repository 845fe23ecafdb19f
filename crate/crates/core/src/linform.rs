//! Arrangement input: defining polynomials written as products of linear
//! forms, and the JSON file format.
//!
//! Coordinates are `x, y, z, t` (at most four variables) or `x1 .. xn`.
//! Over GF(4) and Q(zeta3) the letter `z` denotes the generator, so named
//! coordinates are limited to `x, y` there and `x1 .. xn` must be used from
//! three variables on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::normalize;
use crate::scalar::{parse_coefficient, parse_number, parse_zeta, Cursor, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm(pub Vec<Scalar>);

impl LinearForm {
    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn normalized(&self) -> Vec<Scalar> {
        let mut v = self.0.clone();
        normalize(&mut v);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementSource {
    pub field: FieldSpec,
    pub nvars: usize,
    pub forms: Vec<LinearForm>,
    pub labels: Option<Vec<String>>,
    /// Optional partition in `1,2|3` syntax; only meaningful for induction
    /// table seeds.
    pub partition: Option<String>,
}

const NAMED: [&str; 4] = ["x", "y", "z", "t"];

/// Whether the single-letter coordinate names are usable.
pub fn named_variables(field: FieldSpec, nvars: usize) -> bool {
    if field.has_zeta() {
        nvars <= 2
    } else {
        nvars <= 4
    }
}

pub fn variable_name(field: FieldSpec, nvars: usize, i: usize) -> String {
    if named_variables(field, nvars) {
        NAMED[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn variable_index(name: &str, field: FieldSpec, nvars: usize) -> Option<usize> {
    if let Some(rest) = name.strip_prefix('x') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) && !rest.starts_with('0') {
            let k: usize = rest.parse().ok()?;
            return (1..=nvars).contains(&k).then(|| k - 1);
        }
    }
    if named_variables(field, nvars) {
        let i = NAMED.iter().position(|&n| n == name)?;
        return (i < nvars).then_some(i);
    }
    None
}

/// Render a linear form, e.g. `x+y-z` or `x1-z*x2`.
pub fn render_form(form: &[Scalar], field: FieldSpec) -> String {
    let nvars = form.len();
    let mut out = String::new();
    for (i, c) in form.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let var = variable_name(field, nvars, i);
        let text = c.to_string();
        let first = out.is_empty();
        if c.is_one() {
            if !first {
                out.push('+');
            }
            out.push_str(&var);
        } else if c.neg().is_one() {
            out.push('-');
            out.push_str(&var);
        } else {
            let body = text.strip_prefix('-');
            let compound = body.unwrap_or(&text).contains(['+', '-']);
            if compound {
                if !first {
                    out.push('+');
                }
                out.push_str(&format!("({text})*{var}"));
            } else if let Some(b) = body {
                out.push_str(&format!("-{b}*{var}"));
            } else {
                if !first {
                    out.push('+');
                }
                out.push_str(&format!("{text}*{var}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn render_polynomial(forms: &[LinearForm], field: FieldSpec) -> String {
    forms.iter().map(|f| format!("({})", render_form(&f.0, field))).collect()
}

fn read_ident(cur: &mut Cursor) -> Option<String> {
    let start = cur.pos;
    if !matches!(cur.peek(), Some(b) if b.is_ascii_alphabetic()) {
        return None;
    }
    while matches!(cur.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
        cur.pos += 1;
    }
    Some(String::from_utf8_lossy(&cur.src[start..cur.pos]).into_owned())
}

struct FormParser<'a> {
    field: FieldSpec,
    nvars: usize,
    factor: usize,
    cur: Cursor<'a>,
}

impl FormParser<'_> {
    fn nonlinear(&self, msg: impl Into<String>) -> Error {
        Error::NonLinearFactor { factor: self.factor, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        self.cur.skip_ws();
    }

    /// Optional coefficient in front of a variable.
    fn coefficient(&mut self) -> Result<Option<Scalar>> {
        if self.cur.peek() == Some(b'(') {
            self.cur.pos += 1;
            self.skip_ws();
            let c = parse_coefficient(&mut self.cur, self.field)?;
            self.skip_ws();
            if !self.cur.eat(b')') {
                return Err(Error::parse(self.cur.abs(), "expected `)` after coefficient"));
            }
            return Ok(Some(c));
        }
        let num = parse_number(&mut self.cur, self.field)?;
        let zeta = if self.field.has_zeta() {
            parse_zeta(&mut self.cur, self.field, num.is_some())?
        } else {
            None
        };
        Ok(match (num, zeta) {
            (Some(n), Some(z)) => Some(n.mul(&z)),
            (Some(n), None) => Some(n),
            (None, z) => z,
        })
    }

    fn term(&mut self, coeffs: &mut [Scalar], negate: bool) -> Result<()> {
        let coef = self.coefficient()?;
        self.skip_ws();
        let had_star = self.cur.eat(b'*');
        self.skip_ws();
        let pos = self.cur.abs();
        let Some(name) = read_ident(&mut self.cur) else {
            if coef.is_some() && !had_star {
                return Err(self.nonlinear("constant term"));
            }
            return Err(if self.cur.at_end() {
                Error::parse(pos, "unexpected end of input")
            } else {
                Error::parse(pos, format!("unexpected `{}`", self.cur.peek_char()))
            });
        };
        let idx = variable_index(&name, self.field, self.nvars)
            .ok_or(Error::UnknownVariable { name: name.clone(), pos })?;
        if self.cur.peek() == Some(b'^') {
            return Err(self.nonlinear(format!("power of `{name}`")));
        }
        let save = self.cur.pos;
        self.skip_ws();
        if self.cur.eat(b'*')
            || matches!(self.cur.peek(), Some(b) if b.is_ascii_alphabetic() || b == b'(')
        {
            return Err(self.nonlinear("product of variables"));
        }
        self.cur.pos = save;
        let mut c = coef.unwrap_or_else(|| self.field.one());
        if negate {
            c = c.neg();
        }
        coeffs[idx] = coeffs[idx].add(&c);
        Ok(())
    }

    fn form(&mut self) -> Result<LinearForm> {
        let mut coeffs = vec![self.field.zero(); self.nvars];
        self.skip_ws();
        let mut negate = false;
        if self.cur.eat(b'-') {
            negate = true;
        } else {
            self.cur.eat(b'+');
        }
        self.skip_ws();
        self.term(&mut coeffs, negate)?;
        loop {
            self.skip_ws();
            match self.cur.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                None => break,
                Some(_) => {
                    return Err(Error::parse(
                        self.cur.abs(),
                        format!("unexpected `{}`", self.cur.peek_char()),
                    ))
                }
            }
            self.cur.pos += 1;
            self.skip_ws();
            self.term(&mut coeffs, negate)?;
        }
        let form = LinearForm(coeffs);
        if form.is_zero() {
            return Err(Error::ZeroFactor { factor: self.factor });
        }
        Ok(form)
    }
}

fn parse_form_text(text: &str, base: usize, field: FieldSpec, nvars: usize, factor: usize) -> Result<LinearForm> {
    let mut p = FormParser { field, nvars, factor, cur: Cursor::with_base(text, base) };
    p.form()
}

/// Parse a single linear form such as `x+y-z`.
pub fn parse_linear_form(text: &str, field: FieldSpec, nvars: usize) -> Result<LinearForm> {
    parse_form_text(text, 0, field, nvars, 1)
}

/// Split a defining polynomial into factor substrings with byte offsets.
fn split_factors(text: &str) -> Result<Vec<(usize, &str)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() || b == b'*' {
            i += 1;
            continue;
        }
        if b == b'(' {
            let mut depth = 0usize;
            let start = i;
            loop {
                if i >= bytes.len() {
                    return Err(Error::parse(start, "unbalanced `(`"));
                }
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            out.push((start + 1, &text[start + 1..i]));
            i += 1;
            if bytes.get(i) == Some(&b'^') {
                return Err(Error::NonLinearFactor {
                    factor: out.len(),
                    msg: "power of a factor".into(),
                });
            }
            continue;
        }
        if b == b')' {
            return Err(Error::parse(i, "unbalanced `)`"));
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'*' | b'(' | b')') {
            i += 1;
        }
        out.push((start, &text[start..i]));
    }
    Ok(out)
}

fn check_duplicates(forms: &[LinearForm]) -> Result<()> {
    let normals: Vec<Vec<Scalar>> = forms.iter().map(LinearForm::normalized).collect();
    for j in 0..normals.len() {
        for i in 0..j {
            if normals[i] == normals[j] {
                return Err(Error::DuplicateHyperplane { first: i + 1, second: j + 1 });
            }
        }
    }
    Ok(())
}

pub fn parse_defining_polynomial(text: &str, field: FieldSpec, nvars: usize) -> Result<ArrangementSource> {
    let mut forms = Vec::new();
    for (k, (off, piece)) in split_factors(text)?.into_iter().enumerate() {
        forms.push(parse_form_text(piece, off, field, nvars, k + 1)?);
    }
    check_duplicates(&forms)?;
    Ok(ArrangementSource { field, nvars, forms, labels: None, partition: None })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    field: String,
    nvars: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    polynomial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    forms: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    partition: Option<String>,
}

pub fn parse_arrangement_file(bytes: &[u8]) -> Result<ArrangementSource> {
    let raw: RawSource =
        serde_json::from_slice(bytes).map_err(|e| Error::Schema(e.to_string()))?;
    let field: FieldSpec = raw.field.parse()?;
    let mut src = match (raw.polynomial, raw.forms) {
        (Some(p), None) => parse_defining_polynomial(&p, field, raw.nvars)?,
        (None, Some(rows)) => {
            let mut forms = Vec::with_capacity(rows.len());
            for (k, row) in rows.iter().enumerate() {
                if row.len() != raw.nvars {
                    return Err(Error::Schema(format!(
                        "form {} has {} coefficients, expected {}",
                        k + 1,
                        row.len(),
                        raw.nvars
                    )));
                }
                let coeffs = row.iter().map(|c| Scalar::parse(c, field)).collect::<Result<Vec<_>>>()?;
                let form = LinearForm(coeffs);
                if form.is_zero() {
                    return Err(Error::ZeroFactor { factor: k + 1 });
                }
                forms.push(form);
            }
            check_duplicates(&forms)?;
            ArrangementSource { field, nvars: raw.nvars, forms, labels: None, partition: None }
        }
        _ => return Err(Error::Schema("exactly one of `polynomial` and `forms` is required".into())),
    };
    if let Some(labels) = &raw.labels {
        if labels.len() != src.forms.len() {
            return Err(Error::Schema(format!(
                "{} labels for {} hyperplanes",
                labels.len(),
                src.forms.len()
            )));
        }
    }
    src.labels = raw.labels;
    src.partition = raw.partition;
    Ok(src)
}

/// JSON rendering; `as_polynomial` selects the `polynomial` field over `forms`.
pub fn render_source(src: &ArrangementSource, as_polynomial: bool) -> String {
    let raw = RawSource {
        field: src.field.to_string(),
        nvars: src.nvars,
        polynomial: as_polynomial.then(|| render_polynomial(&src.forms, src.field)),
        forms: (!as_polynomial)
            .then(|| src.forms.iter().map(|f| f.0.iter().map(Scalar::to_string).collect()).collect()),
        labels: src.labels.clone(),
        partition: src.partition.clone(),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}
