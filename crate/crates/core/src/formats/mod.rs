//! Line-oriented text formats. All writers emit canonical output (reduced
//! rationals, single spaces, LF endings) and all readers reject anything a
//! writer would not produce, so files round-trip byte for byte.

mod chain;
mod cps;
mod qps;
mod report;

pub use chain::{chain_to_string, parse_chain, read_chain, write_chain};
pub use cps::{parse_scheme, read_scheme, scheme_to_string, write_scheme};
pub use qps::{parse_qps, qps_to_string, read_qps, write_qps};
pub use report::{
    check_report, density_csv, density_report, subadditivity_report, translation_report, weak_ap_report,
};

use crate::error::{Error, Result};
use crate::numeric::{fmt_rational, parse_rational, Rational};

/// Splits canonical text into numbered lines of tokens.
pub(crate) fn canonical_lines(text: &str) -> Result<Vec<(usize, Vec<&str>)>> {
    if text.contains('\r') {
        return Err(Error::parse(0, "carriage returns are not allowed"));
    }
    let Some(body) = text.strip_suffix('\n') else {
        return Err(Error::parse(0, "missing final newline"));
    };
    body.split('\n')
        .enumerate()
        .map(|(i, line)| {
            let no = i + 1;
            if line.is_empty() {
                return Err(Error::parse(no, "empty line"));
            }
            let tokens: Vec<&str> = line.split(' ').collect();
            if tokens.iter().any(|t| t.is_empty()) {
                return Err(Error::parse(no, "tokens must be separated by single spaces"));
            }
            Ok((no, tokens))
        })
        .collect()
}

pub(crate) fn rational_token(line: usize, token: &str) -> Result<Rational> {
    parse_rational(token).ok_or_else(|| Error::parse(line, format!("`{token}` is not a canonical rational")))
}

pub(crate) fn usize_token(line: usize, token: &str) -> Result<usize> {
    let ok = !token.is_empty()
        && token.bytes().all(|b| b.is_ascii_digit())
        && !(token.len() > 1 && token.starts_with('0'));
    if !ok {
        return Err(Error::parse(line, format!("`{token}` is not a canonical count")));
    }
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("`{token}` is out of range")))
}

pub(crate) fn expect_keyword(line: usize, tokens: &[&str], keyword: &str, arity: usize) -> Result<()> {
    if tokens.first() != Some(&keyword) {
        return Err(Error::parse(line, format!("expected `{keyword}`")));
    }
    if tokens.len() != arity + 1 {
        return Err(Error::parse(
            line,
            format!("`{keyword}` takes {arity} values, found {}", tokens.len() - 1),
        ));
    }
    Ok(())
}

pub(crate) fn join_rationals<'a>(values: impl IntoIterator<Item = &'a Rational>) -> String {
    values.into_iter().map(fmt_rational).collect::<Vec<_>>().join(" ")
}
