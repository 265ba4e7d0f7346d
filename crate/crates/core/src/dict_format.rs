//! Versioned text serialization for dictionaries.
//!
//! Layout: one header line `SRIPDICT v1 p=<p> bases=<m>`, then for each basis
//! a label line followed by p lines, line v holding the p coordinates of
//! vector v as whitespace-separated `re:im` pairs. Floats are written with
//! shortest round-trip formatting, so load(save(d)) reproduces every entry
//! bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::dictionary::{AtomId, Dictionary, Prime, ORTHO_TOL_LOADED};
use crate::error::{Error, Result};

const MAGIC: &str = "SRIPDICT";
const VERSION: &str = "v1";

pub fn save_dictionary(d: &Dictionary, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let p = d.p().as_usize();
    writeln!(w, "{MAGIC} {VERSION} p={} bases={}", d.p(), d.num_bases())?;
    let mut line = String::new();
    for b in 0..d.num_bases() {
        writeln!(w, "{}", d.label(b))?;
        for v in 0..p {
            let atom = d.atom(AtomId::new(b, v)).expect("enumerated id");
            line.clear();
            for (k, z) in atom.coords().iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{}:{}", z.re, z.im));
            }
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    Ok(())
}

struct LineReader {
    path: String,
    inner: BufReader<File>,
    line_no: usize,
}

impl LineReader {
    fn next_line(&mut self, expected: &str) -> Result<String> {
        let mut buf = String::new();
        let n = self.inner.read_line(&mut buf)?;
        self.line_no += 1;
        if n == 0 {
            return Err(Error::Parse {
                path: self.path.clone(),
                line: self.line_no,
                token: String::new(),
                message: format!("unexpected end of file, expected {expected}"),
            });
        }
        while buf.ends_with('\n') || buf.ends_with('\r') {
            buf.pop();
        }
        Ok(buf)
    }

    fn fail(&self, token: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line: self.line_no,
            token: token.to_string(),
            message: message.into(),
        }
    }
}

fn parse_key_value(r: &LineReader, field: &str, key: &str) -> Result<u64> {
    let value = field
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| r.fail(field, format!("expected {key}=<integer>")))?;
    value
        .parse::<u64>()
        .map_err(|e| r.fail(value, format!("bad {key} value: {e}")))
}

fn parse_complex(r: &LineReader, token: &str) -> Result<Complex64> {
    let (re, im) = token
        .split_once(':')
        .ok_or_else(|| r.fail(token, "expected re:im"))?;
    let re: f64 = re
        .parse()
        .map_err(|e| r.fail(token, format!("bad real part: {e}")))?;
    let im: f64 = im
        .parse()
        .map_err(|e| r.fail(token, format!("bad imaginary part: {e}")))?;
    Ok(Complex64::new(re, im))
}

pub fn load_dictionary(path: &Path) -> Result<Dictionary> {
    let mut r = LineReader {
        path: path.display().to_string(),
        inner: BufReader::new(File::open(path)?),
        line_no: 0,
    };

    let header = r.next_line("header")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    match fields.as_slice() {
        [magic, version, p_field, m_field] => {
            if *magic != MAGIC {
                return Err(r.fail(magic, format!("expected magic {MAGIC}")));
            }
            if *version != VERSION {
                return Err(r.fail(version, format!("unsupported version, expected {VERSION}")));
            }
            let p_value = parse_key_value(&r, p_field, "p")?;
            let m = parse_key_value(&r, m_field, "bases")? as usize;
            let p = Prime::new(p_value)?;
            if m == 0 {
                return Err(Error::NoBases);
            }
            let n = p.as_usize();
            let mut labeled = Vec::with_capacity(m);
            for _ in 0..m {
                let label = r.next_line("basis label")?;
                let mut cols = Vec::with_capacity(n);
                for _ in 0..n {
                    let row = r.next_line("vector line")?;
                    let mut coords = Vec::with_capacity(n);
                    for token in row.split_whitespace() {
                        coords.push(parse_complex(&r, token)?);
                    }
                    if coords.len() != n {
                        return Err(r.fail(
                            &row,
                            format!("expected {n} entries, found {}", coords.len()),
                        ));
                    }
                    cols.push(coords);
                }
                labeled.push((label, cols));
            }
            Dictionary::from_explicit_bases(p, labeled, ORTHO_TOL_LOADED)
        }
        _ => Err(r.fail(&header, "expected `SRIPDICT v1 p=<p> bases=<m>`")),
    }
}
