//! Loading numeric data: delimited text files and the two bundled datasets.
//!
//! Parsing rules: blank lines and `#` comments are ignored; rows before the
//! first numeric row are headers; once data has started, any unparsable
//! field is an error that names its line.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SortedSample;

const DANISH: &str = include_str!("../data/danish.txt");
const BMW: &str = include_str!("../data/bmw.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    #[default]
    None,
    Abs,
    Negate,
}

impl Transform {
    fn apply(self, x: f64) -> f64 {
        match self {
            Transform::None => x,
            Transform::Abs => x.abs(),
            Transform::Negate => -x,
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::None => "none",
            Transform::Abs => "abs",
            Transform::Negate => "negate",
        })
    }
}

/// Which tail of the data becomes the upper tail of the sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    #[default]
    Upper,
    Lower,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::Upper => "upper",
            Tail::Lower => "lower",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    /// Zero-based field index.
    Index(usize),
    /// Header name.
    Name(String),
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    /// Digits select by index, anything else by header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// First of comma, tab, semicolon found in the first row; else whitespace.
    #[default]
    Auto,
    Char(char),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    raw: Vec<f64>,
    name: String,
    transform: Transform,
    /// Values as loaded, before `transform`.
    loaded: Vec<f64>,
}

impl Dataset {
    /// Fails on an empty or non-finite input.
    pub fn new(raw: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if raw.is_empty() {
            return Err(Error::EmptyColumn(name));
        }
        if let Some(bad) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("Dataset", format!("non-finite value {bad}")));
        }
        Ok(Dataset {
            loaded: raw.clone(),
            raw,
            name,
            transform: Transform::None,
        })
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Apply `t` to the values as loaded. Transforms do not compose: the
    /// result is always `t` applied to the original data.
    pub fn with_transform(&self, t: Transform) -> Dataset {
        Dataset {
            raw: self.loaded.iter().map(|&x| t.apply(x)).collect(),
            name: self.name.clone(),
            transform: t,
            loaded: self.loaded.clone(),
        }
    }
}

/// Sort for tail analysis: `Upper` as is, `Lower` negated so the lower tail
/// of the data becomes the upper tail of the sample.
pub fn prepare_tail_sample(d: &Dataset, tail: Tail) -> SortedSample {
    let values = match tail {
        Tail::Upper => d.raw.clone(),
        Tail::Lower => d.raw.iter().map(|x| -x).collect(),
    };
    let source = format!("{} [transform={}, tail={}]", d.name, d.transform, tail);
    SortedSample::from_unsorted(values, source).expect("dataset values are finite")
}

/// Read one numeric column from a text file.
pub fn load_numeric(path: &Path, column: Option<&Column>, delimiter: Delimiter) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    parse_numeric(&text, &path.display().to_string(), column, delimiter)
}

/// [`load_numeric`] on an in-memory string.
pub fn parse_numeric(text: &str, name: &str, column: Option<&Column>, delimiter: Delimiter) -> Result<Dataset> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(&(_, first)) = rows.first() else {
        return Err(Error::EmptyColumn(name.to_string()));
    };
    let delim = match delimiter {
        Delimiter::Auto => [',', '\t', ';'].into_iter().find(|&c| first.contains(c)),
        Delimiter::Char(c) if c.is_whitespace() => None,
        Delimiter::Char(c) => Some(c),
    };
    let split = |line: &'_ str| -> Vec<String> {
        match delim {
            Some(c) => line.split(c).map(clean_field).collect(),
            None => line.split_whitespace().map(clean_field).collect(),
        }
    };

    // Headers are the rows before the first row whose selected field parses.
    let mut idx = match column {
        Some(Column::Index(i)) => Some(*i),
        Some(Column::Name(want)) => {
            let header = split(first);
            let pos = header.iter().position(|h| h == want);
            Some(pos.ok_or_else(|| Error::EmptyColumn(format!("{want} (not in header of {name})")))?)
        }
        None => None,
    };
    let mut values = Vec::new();
    for &(line_no, line) in &rows {
        let fields = split(line);
        let col = match idx {
            Some(i) => i,
            None => match fields.iter().position(|f| parse_finite(f).is_some()) {
                Some(i) => {
                    idx = Some(i);
                    i
                }
                None => continue,
            },
        };
        let field = fields.get(col).map(String::as_str).unwrap_or("");
        match parse_finite(field) {
            Some(v) => values.push(v),
            None if values.is_empty() => continue,
            None => {
                return Err(Error::Parse {
                    line: line_no,
                    token: field.to_string(),
                })
            }
        }
    }
    let label = match column {
        Some(Column::Name(n)) => format!("{name}:{n}"),
        Some(Column::Index(i)) => format!("{name}:{i}"),
        None => name.to_string(),
    };
    if values.is_empty() {
        return Err(Error::EmptyColumn(label));
    }
    Dataset::new(values, label)
}

fn clean_field(f: &str) -> String {
    f.trim().trim_matches('"').trim().to_string()
}

fn parse_finite(f: &str) -> Option<f64> {
    f.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// One value per line in shortest round-trip form.
pub fn to_single_column(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&format!("{v:?}\n"));
    }
    out
}

/// Danish fire insurance losses (millions of Danish Krone), 1980–1990.
pub fn danish() -> Dataset {
    parse_numeric(DANISH, "danish", None, Delimiter::Auto).expect("bundled data parses")
}

/// BMW daily log-returns, 1973–1996.
pub fn bmw() -> Dataset {
    parse_numeric(BMW, "bmw", None, Delimiter::Auto).expect("bundled data parses")
}

/// A bundled dataset by name.
pub fn bundled(name: &str) -> Option<Dataset> {
    match name {
        "danish" => Some(danish()),
        "bmw" => Some(bmw()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Dataset> {
        parse_numeric(text, "t", None, Delimiter::Auto)
    }

    #[test]
    fn single_column() {
        assert_eq!(parse("1.0\n2.5\n").unwrap().raw(), &[1.0, 2.5]);
        assert_eq!(parse("\n# comment\n 3 \n\n-4e2\n").unwrap().raw(), &[3.0, -400.0]);
    }

    #[test]
    fn header_is_skipped() {
        assert_eq!(parse("loss\n1.5\n2\n").unwrap().raw(), &[1.5, 2.0]);
        assert_eq!(parse("\"loss\"\n\"1.5\"\n").unwrap().raw(), &[1.5]);
    }

    #[test]
    fn parse_error_cites_line() {
        match parse("1.0\n2.0\nabc\n4\n") {
            Err(Error::Parse { line, token }) => {
                assert_eq!(line, 3);
                assert_eq!(token, "abc");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("1\nNaN\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(parse(""), Err(Error::EmptyColumn(_))));
        assert!(matches!(parse("a\nb\n"), Err(Error::EmptyColumn(_))));
    }

    #[test]
    fn delimited_columns() {
        let csv = "date,loss\n1980-01-03,1.5\n1980-01-04,2.5\n";
        assert_eq!(parse(csv).unwrap().raw(), &[1.5, 2.5]);
        let by_name = parse_numeric(csv, "t", Some(&Column::Name("loss".into())), Delimiter::Auto).unwrap();
        assert_eq!(by_name.raw(), &[1.5, 2.5]);
        let tsv = "a\tb\n1\t2\n3\t4\n";
        let second = parse_numeric(tsv, "t", Some(&Column::Index(1)), Delimiter::Auto).unwrap();
        assert_eq!(second.raw(), &[2.0, 4.0]);
        let semi = parse_numeric("1;2\n3;4\n", "t", Some(&Column::Index(1)), Delimiter::Auto).unwrap();
        assert_eq!(semi.raw(), &[2.0, 4.0]);
        let space = parse_numeric("1  2\n3 4\n", "t", Some(&Column::Index(1)), Delimiter::Char(' ')).unwrap();
        assert_eq!(space.raw(), &[2.0, 4.0]);
        assert!(parse_numeric(csv, "t", Some(&Column::Name("nope".into())), Delimiter::Auto).is_err());
    }

    #[test]
    fn column_from_str() {
        assert_eq!("2".parse::<Column>().unwrap(), Column::Index(2));
        assert_eq!("loss".parse::<Column>().unwrap(), Column::Name("loss".into()));
    }

    #[test]
    fn load_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        std::fs::write(&path, "v\n1\n2\n").unwrap();
        let d = load_numeric(&path, None, Delimiter::Auto).unwrap();
        assert_eq!(d.raw(), &[1.0, 2.0]);
        assert_eq!(d.transform(), Transform::None);
        assert!(matches!(
            load_numeric(&dir.path().join("missing"), None, Delimiter::Auto),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn tail_preparation() {
        let d = Dataset::new(vec![1.0, 3.0, 2.0], "t").unwrap();
        assert_eq!(prepare_tail_sample(&d, Tail::Upper).values(), &[3.0, 2.0, 1.0]);
        assert_eq!(prepare_tail_sample(&d, Tail::Lower).values(), &[-1.0, -2.0, -3.0]);
        assert!(prepare_tail_sample(&d, Tail::Lower).source().contains("tail=lower"));
    }

    #[test]
    fn transforms() {
        let d = Dataset::new(vec![-2.0, 1.0], "t").unwrap();
        let a = d.with_transform(Transform::Abs);
        assert_eq!(a.raw(), &[2.0, 1.0]);
        let n = d.with_transform(Transform::Negate);
        assert_eq!(n.raw(), &[2.0, -1.0]);
        assert_eq!(a.with_transform(Transform::None).raw(), d.raw());
        assert_eq!(n.with_transform(Transform::Abs).raw(), &[2.0, 1.0]);
    }

    #[test]
    fn bundled_sizes() {
        let dan = danish();
        assert_eq!(dan.len(), 2167);
        assert!(dan.raw().iter().all(|&x| x > 0.0));
        let s = prepare_tail_sample(&dan, Tail::Upper);
        assert!(s.values()[0] > 250.0);
        let b = bmw();
        assert_eq!(b.len(), 6146);
        assert_eq!(prepare_tail_sample(&b, Tail::Lower).len(), 6146);
        assert!(bundled("danish").is_some() && bundled("other").is_none());
    }

    proptest! {
        #[test]
        fn single_column_round_trip(values in prop::collection::vec(-1e300f64..1e300, 1..200)) {
            let text = to_single_column(&values);
            let back = parse(&text).unwrap();
            prop_assert_eq!(back.raw(), &values[..]);
        }

        #[test]
        fn prepared_sample_is_sorted(values in prop::collection::vec(-1e6f64..1e6, 1..200), lower in any::<bool>()) {
            let d = Dataset::new(values, "p").unwrap();
            let tail = if lower { Tail::Lower } else { Tail::Upper };
            let s = prepare_tail_sample(&d, tail);
            prop_assert!(s.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
