//! Scheme files:
//!
//! ```text
//! cps 1
//! dims <m> <n>
//! <m+n rows of m+n rationals>     basis rows; columns generate the lattice
//! window <boxes>
//! lo <o|c> <a> hi <o|c> <b>       m lines per box
//! ```

use std::io::{Read, Write};

use super::{canonical_lines, expect_keyword, join_rationals, rational_token, usize_token};
use crate::cutproject::{CutProjectScheme, Window};
use crate::error::{Error, Result};
use crate::numeric::{fmt_rational, Interval, IntervalBox, RMatrix};

fn flag(closed: bool) -> &'static str {
    if closed {
        "c"
    } else {
        "o"
    }
}

pub fn scheme_to_string(scheme: &CutProjectScheme) -> String {
    let (m, n) = (scheme.internal_dim(), scheme.physical_dim());
    let mut out = format!("cps 1\ndims {m} {n}\n");
    for i in 0..m + n {
        out.push_str(&join_rationals(scheme.basis().row(i)));
        out.push('\n');
    }
    let boxes = scheme.window().boxes();
    out.push_str(&format!("window {}\n", boxes.len()));
    for b in boxes {
        for axis in b.axes() {
            out.push_str(&format!(
                "lo {} {} hi {} {}\n",
                flag(axis.lo_closed),
                fmt_rational(&axis.lo),
                flag(axis.hi_closed),
                fmt_rational(&axis.hi)
            ));
        }
    }
    out
}

pub fn write_scheme(scheme: &CutProjectScheme, mut w: impl Write) -> Result<()> {
    w.write_all(scheme_to_string(scheme).as_bytes())?;
    Ok(())
}

fn parse_flag(line: usize, token: &str) -> Result<bool> {
    match token {
        "c" => Ok(true),
        "o" => Ok(false),
        _ => Err(Error::parse(
            line,
            format!("face flag must be `o` or `c`, found `{token}`"),
        )),
    }
}

pub fn parse_scheme(text: &str) -> Result<CutProjectScheme> {
    let lines = canonical_lines(text)?;
    let mut it = lines.iter();
    let mut next = |what: &str| {
        it.next()
            .ok_or_else(|| Error::parse(lines.len() + 1, format!("missing {what}")))
    };

    let (no, header) = next("header")?;
    if header.as_slice() != ["cps", "1"] {
        return Err(Error::parse(*no, "expected `cps 1`"));
    }
    let (no, dims) = next("dims line")?;
    expect_keyword(*no, dims, "dims", 2)?;
    let m = usize_token(*no, dims[1])?;
    let n = usize_token(*no, dims[2])?;
    if n == 0 {
        return Err(Error::parse(*no, "physical dimension must be positive"));
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for _ in 0..size {
        let (no, tokens) = next("basis row")?;
        if tokens.len() != size {
            return Err(Error::parse(*no, format!("basis rows need {size} entries")));
        }
        rows.push(
            tokens
                .iter()
                .map(|t| rational_token(*no, t))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let basis = RMatrix::from_rows(rows)?;

    let (wno, wline) = next("window line")?;
    expect_keyword(*wno, wline, "window", 1)?;
    let count = usize_token(*wno, wline[1])?;
    if count == 0 {
        return Err(Error::parse(*wno, "window needs at least one box"));
    }
    let mut boxes = Vec::with_capacity(count);
    for _ in 0..count {
        let mut axes = Vec::with_capacity(m);
        for _ in 0..m {
            let (no, t) = next("window face line")?;
            if t.len() != 6 || t[0] != "lo" || t[3] != "hi" {
                return Err(Error::parse(*no, "expected `lo <o|c> <a> hi <o|c> <b>`"));
            }
            axes.push(Interval::new(
                rational_token(*no, t[2])?,
                parse_flag(*no, t[1])?,
                rational_token(*no, t[5])?,
                parse_flag(*no, t[4])?,
            ));
        }
        boxes.push(IntervalBox::new(axes).map_err(|e| Error::parse(*wno, e.to_string()))?);
    }
    if let Some((no, _)) = it.next() {
        return Err(Error::parse(*no, "trailing content"));
    }
    let window = if m == 0 {
        if count != 1 {
            return Err(Error::parse(
                *wno,
                "a window without internal space has exactly one box",
            ));
        }
        Window::vacuous()
    } else {
        Window::new(m, boxes).map_err(|e| Error::parse(*wno, e.to_string()))?
    };
    CutProjectScheme::new(m, n, basis, window)
}

pub fn read_scheme(mut r: impl Read) -> Result<CutProjectScheme> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_scheme(&text)
}
