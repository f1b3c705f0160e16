//! Problem files: one declaration per line, `#` starts a comment.
//!
//! ```text
//! field GF(7)
//! vars x y z
//! ideal x^2 - y^2*z
//! point 0 0 0
//! center x y
//! cover base y z
//! g_b y^2 - z^3
//! sequence origin; x y
//! ```

use multstrat::field::{Field, FieldElem};
use multstrat::parse::parse_poly;
use multstrat::Poly;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ProblemError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A center as written in the file.
#[derive(Debug, Clone, PartialEq)]
pub enum CenterSpec {
    /// Cutting variables; `origin` lists them all.
    Vars(Vec<usize>),
    /// Independent linear forms through the point.
    Forms(Vec<Poly>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverSpec {
    Auto,
    Base(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub field: Field,
    pub vars: Vec<String>,
    pub ideal: Vec<Poly>,
    pub point: Option<Vec<FieldElem>>,
    pub center: Option<CenterSpec>,
    pub cover: Option<CoverSpec>,
    pub g_b: Option<Poly>,
    pub distinguished: Option<usize>,
    pub sequence: Vec<CenterSpec>,
}

impl Problem {
    pub fn point_or_origin(&self) -> Vec<FieldElem> {
        self.point.clone().unwrap_or_else(|| vec![self.field.zero(); self.vars.len()])
    }
}

const KEYWORDS: [&str; 9] = ["field", "vars", "ideal", "point", "center", "cover", "g_b", "distinguished", "sequence"];

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    /// Rest of the line and its 1-based starting column.
    rest: &'a str,
    rest_col: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ProblemError {
    ProblemError { line, column, message: message.into() }
}

fn split_lines(text: &str) -> Result<Vec<Line<'_>>, ProblemError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.chars().count() - trimmed.chars().count();
        let keyword = trimmed.split_whitespace().next().unwrap();
        if !KEYWORDS.contains(&keyword) {
            return Err(err(k + 1, lead + 1, format!("unknown declaration `{keyword}`")));
        }
        let after = &trimmed[keyword.len()..];
        let rest = after.trim_start();
        let rest_col = lead + keyword.chars().count() + (after.chars().count() - rest.chars().count()) + 1;
        out.push(Line { number: k + 1, keyword, rest: rest.trim_end(), rest_col });
    }
    Ok(out)
}

/// Pieces of `s` separated by `sep`, each with its starting column.
fn pieces(s: &str, col: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), sep))) {
        if c == sep {
            let piece = &s[start..i];
            let lead = piece.len() - piece.trim_start().len();
            out.push((piece.trim(), col + s[..start + lead].chars().count()));
            start = i + c.len_utf8();
        }
    }
    out
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    let t = s.trim();
    if t == "Q" || t == "QQ" {
        return Ok(Field::Rational);
    }
    let inner = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).ok_or(format!("unknown field `{t}`"))?;
    let p: u32 = inner.trim().parse().map_err(|_| format!("unknown field `{t}`"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn parse_poly_at(text: &str, col: usize, line: usize, vars: &[String], field: Field) -> Result<Poly, ProblemError> {
    parse_poly(text, vars, field).map_err(|e| err(line, col + e.column - 1, e.message))
}

fn parse_var_list(s: &str, col: usize, line: usize, vars: &[String]) -> Result<Vec<usize>, ProblemError> {
    let mut out = Vec::new();
    for (w, c) in pieces(s, col, ' ').into_iter().filter(|(w, _)| !w.is_empty()) {
        let idx = vars.iter().position(|v| v == w).ok_or(err(line, c, format!("undeclared variable `{w}`")))?;
        out.push(idx);
    }
    if out.is_empty() {
        return Err(err(line, col, "expected variable names"));
    }
    Ok(out)
}

fn parse_center(s: &str, col: usize, line: usize, vars: &[String], field: Field) -> Result<CenterSpec, ProblemError> {
    if s == "origin" || s == "point" {
        return Ok(CenterSpec::Vars((0..vars.len()).collect()));
    }
    if let Some(forms) = s.strip_prefix("forms") {
        let off = col + (s.len() - forms.len());
        let mut out = Vec::new();
        for (p, c) in pieces(forms, off, ',') {
            out.push(parse_poly_at(p, c, line, vars, field)?);
        }
        return Ok(CenterSpec::Forms(out));
    }
    Ok(CenterSpec::Vars(parse_var_list(s, col, line, vars)?))
}

/// Parses a problem; `field_override` replaces the declared field.
pub fn parse_problem(text: &str, field_override: Option<Field>) -> Result<Problem, ProblemError> {
    let lines = split_lines(text)?;
    let mut field = Field::Rational;
    let mut vars: Option<Vec<String>> = None;
    for l in &lines {
        match l.keyword {
            "field" => field = parse_field(l.rest).map_err(|m| err(l.number, l.rest_col, m))?,
            "vars" => {
                let names: Vec<String> = l.rest.split_whitespace().map(str::to_string).collect();
                for (w, c) in pieces(l.rest, l.rest_col, ' ').into_iter().filter(|(w, _)| !w.is_empty()) {
                    let ok = w.chars().next().is_some_and(|ch| ch.is_alphabetic() || ch == '_')
                        && w.chars().all(|ch| ch.is_alphanumeric() || ch == '_');
                    if !ok {
                        return Err(err(l.number, c, format!("invalid variable name `{w}`")));
                    }
                }
                if names.is_empty() {
                    return Err(err(l.number, l.rest_col, "no variables declared"));
                }
                vars = Some(names);
            }
            _ => {}
        }
    }
    if let Some(f) = field_override {
        field = f;
    }
    let vars = vars.ok_or(err(1, 1, "missing `vars` declaration"))?;
    let mut p = Problem {
        field,
        vars: vars.clone(),
        ideal: Vec::new(),
        point: None,
        center: None,
        cover: None,
        g_b: None,
        distinguished: None,
        sequence: Vec::new(),
    };
    for l in &lines {
        let (n, rest, col) = (l.number, l.rest, l.rest_col);
        match l.keyword {
            "ideal" => {
                for (piece, c) in pieces(rest, col, ',') {
                    p.ideal.push(parse_poly_at(piece, c, n, &vars, field)?);
                }
            }
            "point" => {
                let coords: Vec<(&str, usize)> = pieces(rest, col, ' ').into_iter().filter(|(w, _)| !w.is_empty()).collect();
                if coords.len() != vars.len() {
                    return Err(err(n, col, format!("point needs {} coordinates, found {}", vars.len(), coords.len())));
                }
                let mut pt = Vec::new();
                for (w, c) in coords {
                    let v = parse_poly_at(w, c, n, &[], field)?;
                    pt.push(v.constant_term());
                }
                p.point = Some(pt);
            }
            "center" => p.center = Some(parse_center(rest, col, n, &vars, field)?),
            "cover" => {
                p.cover = Some(if rest == "auto" {
                    CoverSpec::Auto
                } else if let Some(b) = rest.strip_prefix("base") {
                    CoverSpec::Base(parse_var_list(b, col + (rest.len() - b.len()), n, &vars)?)
                } else {
                    return Err(err(n, col, "expected `auto` or `base <vars>`"));
                })
            }
            "g_b" => p.g_b = Some(parse_poly_at(rest, col, n, &vars, field)?),
            "distinguished" => p.distinguished = Some(parse_var_list(rest, col, n, &vars)?[0]),
            "sequence" => {
                for (piece, c) in pieces(rest, col, ';') {
                    p.sequence.push(parse_center(piece, c, n, &vars, field)?);
                }
            }
            _ => {}
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn umbrella_problem() {
        let p = parse_problem("field GF(5)\nvars x y z\nideal x^2 - y^2*z\npoint 0 0 0", None).unwrap();
        assert_eq!(p.field, Field::Prime(5));
        assert_eq!(p.vars, vec!["x", "y", "z"]);
        assert_eq!(p.ideal.len(), 1);
        assert_eq!(p.point.unwrap().len(), 3);
    }

    #[test]
    fn cusp_problem() {
        let p = parse_problem("field Q\nvars x y\nideal x^2 - y^3", None).unwrap();
        assert_eq!(p.field, Field::Rational);
        assert!(p.point.is_none());
    }

    #[test]
    fn undeclared_variable_is_located() {
        let e = parse_problem("vars x\nideal w", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert!(e.message.contains('w'));
        let e = parse_problem("vars x y\n\nideal x, y + q", None).unwrap_err();
        assert_eq!((e.line, e.column), (3, 14));
    }

    #[test]
    fn other_errors() {
        let e = parse_problem("field GF(6)\nvars x", None).unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = parse_problem("vars x\nbogus 1", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = parse_problem("vars x y\npoint 1", None).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_problem("vars x y\ncenter x t", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        assert!(parse_problem("ideal x", None).is_err());
    }

    #[test]
    fn blocks() {
        let text = "vars x y z # coordinates\nideal x^2 - y^2*z\ncover base y z\ncenter origin\nsequence origin; x y\ng_b y^2 - z^3\npoint 1/2 -1 0";
        let p = parse_problem(text, Some(Field::Prime(7))).unwrap();
        assert_eq!(p.field, Field::Prime(7));
        assert_eq!(p.cover, Some(CoverSpec::Base(vec![1, 2])));
        assert_eq!(p.center, Some(CenterSpec::Vars(vec![0, 1, 2])));
        assert_eq!(p.sequence, vec![CenterSpec::Vars(vec![0, 1, 2]), CenterSpec::Vars(vec![0, 1])]);
        assert_eq!(p.point.unwrap()[0], Field::Prime(7).from_i64(4));
        let p = parse_problem("vars x y\nideal x*y\ncenter forms x - y", None).unwrap();
        assert!(matches!(p.center, Some(CenterSpec::Forms(ref f)) if f.len() == 1));
    }
}
