//! Point set files:
//!
//! ```text
//! qps 1
//! dim <n>
//! domain <c_1> … <c_n> <R>
//! <x_1> … <x_n>        one line per point, lexicographic order
//! ```

use std::io::{Read, Write};

use super::{canonical_lines, expect_keyword, join_rationals, rational_token, usize_token};
use crate::error::{Error, Result};
use crate::numeric::{fmt_rational, RVector};
use crate::pointset::{Domain, PointSet};

pub fn qps_to_string(set: &PointSet) -> Result<String> {
    if !set.is_complete() {
        return Err(Error::IncompleteDomain);
    }
    let d = set.domain();
    let mut out = format!(
        "qps 1\ndim {}\ndomain {} {}\n",
        set.dim(),
        join_rationals(d.center.coords()),
        fmt_rational(&d.radius)
    );
    for p in set.iter() {
        out.push_str(&join_rationals(p.coords()));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_qps(set: &PointSet, mut w: impl Write) -> Result<()> {
    w.write_all(qps_to_string(set)?.as_bytes())?;
    Ok(())
}

pub fn parse_qps(text: &str) -> Result<PointSet> {
    let lines = canonical_lines(text)?;
    if lines.len() < 3 {
        return Err(Error::parse(lines.len() + 1, "truncated header"));
    }
    let (no, header) = &lines[0];
    if header.as_slice() != ["qps", "1"] {
        return Err(Error::parse(*no, "expected `qps 1`"));
    }
    let (no, dim_line) = &lines[1];
    expect_keyword(*no, dim_line, "dim", 1)?;
    let dim = usize_token(*no, dim_line[1])?;
    if dim == 0 {
        return Err(Error::parse(*no, "dimension must be positive"));
    }
    let (no, dom) = &lines[2];
    expect_keyword(*no, dom, "domain", dim + 1)?;
    let vals = dom[1..]
        .iter()
        .map(|t| rational_token(*no, t))
        .collect::<Result<Vec<_>>>()?;
    let radius = vals[dim].clone();
    let domain = Domain::new(RVector::new(vals[..dim].to_vec()), radius);

    let mut points: Vec<RVector> = Vec::with_capacity(lines.len() - 3);
    for (no, tokens) in &lines[3..] {
        if tokens.len() != dim {
            return Err(Error::parse(*no, format!("expected {dim} coordinates")));
        }
        let p = RVector::new(
            tokens
                .iter()
                .map(|t| rational_token(*no, t))
                .collect::<Result<_>>()?,
        );
        if let Some(prev) = points.last() {
            if *prev >= p {
                return Err(Error::parse(*no, "points must be strictly increasing"));
            }
        }
        if !domain.contains_point(&p) {
            return Err(Error::parse(*no, format!("point {p} lies outside the domain")));
        }
        points.push(p);
    }
    PointSet::new(dim, points, domain).map_err(|e| Error::parse(3, e.to_string()))
}

pub fn read_qps(mut r: impl Read) -> Result<PointSet> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_qps(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutproject::fixtures::residue_scheme;
    use crate::numeric::{int, rat};

    #[test]
    fn empty_set() {
        let s = PointSet::empty(2, Domain::new(RVector::zeros(2), int(1))).unwrap();
        let text = qps_to_string(&s).unwrap();
        assert_eq!(text, "qps 1\ndim 2\ndomain 0 0 1\n");
        assert_eq!(parse_qps(&text).unwrap(), s);
    }

    #[test]
    fn residue_round_trip() {
        let s = residue_scheme()
            .enumerate(&RVector::zeros(1), &int(5))
            .unwrap()
            .patch;
        let text = qps_to_string(&s).unwrap();
        assert_eq!(text, "qps 1\ndim 1\ndomain 0 5\n-3\n-2\n0\n1\n3\n4\n");
        let back = parse_qps(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(qps_to_string(&back).unwrap(), text);
    }

    #[test]
    fn rationals_round_trip() {
        let s = PointSet::new(
            2,
            vec![
                RVector::new(vec![rat(-1, 2), rat(7, 3)]),
                RVector::new(vec![rat(1, 5), int(0)]),
            ],
            Domain::new(RVector::new(vec![rat(1, 2), int(0)]), int(3)),
        )
        .unwrap();
        let text = qps_to_string(&s).unwrap();
        assert_eq!(text, "qps 1\ndim 2\ndomain 1/2 0 3\n-1/2 7/3\n1/5 0\n");
        assert_eq!(parse_qps(&text).unwrap(), s);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "qps 2\ndim 1\ndomain 0 5\n",
            "qps 1\ndim 1\ndomain 0 5",
            "qps 1\r\ndim 1\ndomain 0 5\n",
            "qps 1\ndim 1\ndomain 0 5\n2/4\n",
            "qps 1\ndim 1\ndomain 0 5\n1.5\n",
            "qps 1\ndim 1\ndomain 0 5\n1\n0\n",
            "qps 1\ndim 1\ndomain 0 5\n1\n1\n",
            "qps 1\ndim 1\ndomain 0 5\n5\n",
            "qps 1\ndim 1\ndomain 0 5\n1 \n",
            "qps 1\ndim 1\ndomain 0 5\n\n",
            "qps 1\ndim 2\ndomain 0 5\n",
            "qps 1\ndim 0\ndomain 5\n",
            "qps 1\ndim 1\ndomain 0 0\n",
            "qps 1\ndim 01\ndomain 0 5\n",
            "qps 1\ndim 1\n",
        ] {
            assert!(matches!(parse_qps(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }

    #[test]
    fn incomplete_sets_are_not_written() {
        let s = PointSet::integer_grid(1, &int(3)).unwrap();
        let img = crate::discretize::apply_hat(&crate::numeric::RMatrix::identity(1), &s).unwrap();
        assert!(matches!(qps_to_string(&img), Err(Error::IncompleteDomain)));
    }
}
