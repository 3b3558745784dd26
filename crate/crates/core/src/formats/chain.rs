//! Matrix chain files: `chain <k> <n>` followed by `k` blocks of `n` rows.

use std::io::{Read, Write};

use super::{canonical_lines, expect_keyword, join_rationals, rational_token, usize_token};
use crate::discretize::MapChain;
use crate::error::{Error, Result};
use crate::numeric::RMatrix;

pub fn chain_to_string(chain: &MapChain) -> String {
    let n = chain.dim();
    let mut out = format!("chain {} {n}\n", chain.len());
    for a in chain.matrices() {
        for i in 0..n {
            out.push_str(&join_rationals(a.row(i)));
            out.push('\n');
        }
    }
    out
}

pub fn write_chain(chain: &MapChain, mut w: impl Write) -> Result<()> {
    w.write_all(chain_to_string(chain).as_bytes())?;
    Ok(())
}

pub fn parse_chain(text: &str) -> Result<MapChain> {
    let lines = canonical_lines(text)?;
    let Some((no, header)) = lines.first() else {
        return Err(Error::parse(1, "empty chain file"));
    };
    expect_keyword(*no, header, "chain", 2)?;
    let k = usize_token(*no, header[1])?;
    let n = usize_token(*no, header[2])?;
    if k == 0 || n == 0 {
        return Err(Error::parse(*no, "chain length and dimension must be positive"));
    }
    if lines.len() != 1 + k * n {
        return Err(Error::parse(
            lines.len().min(1 + k * n) + 1,
            format!("expected {} matrix rows, found {}", k * n, lines.len() - 1),
        ));
    }
    let mut mats = Vec::with_capacity(k);
    for block in lines[1..].chunks(n) {
        let mut rows = Vec::with_capacity(n);
        for (no, tokens) in block {
            if tokens.len() != n {
                return Err(Error::parse(*no, format!("matrix rows need {n} entries")));
            }
            rows.push(
                tokens
                    .iter()
                    .map(|t| rational_token(*no, t))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        mats.push(RMatrix::from_rows(rows)?);
    }
    MapChain::new(mats)
}

pub fn read_chain(mut r: impl Read) -> Result<MapChain> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_chain(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{sample_sl2_chain, RngState};

    #[test]
    fn two_maps() {
        let text = "chain 2 2\n1 1/2\n0 1\n1 0\n1/3 1\n";
        let chain = parse_chain(text).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain_to_string(&chain), text);
    }

    #[test]
    fn sampled_round_trip() {
        let chain = sample_sl2_chain(&mut RngState::new(42), 3).unwrap();
        assert_eq!(parse_chain(&chain_to_string(&chain)).unwrap(), chain);
    }

    #[test]
    fn rejects() {
        assert!(matches!(
            parse_chain("chain 1 2\n1 2\n2 4\n"),
            Err(Error::Singular)
        ));
        assert!(parse_chain("chain 2 1\n1\n").is_err());
        assert!(parse_chain("chain 0 1\n").is_err());
        assert!(parse_chain("chain 1 1\n1 0\n").is_err());
    }
}
