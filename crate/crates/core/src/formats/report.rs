//! `rpt 1` reports: a header line, `kind <name>`, then `key value…` lines with
//! exact rationals.

use super::join_rationals;
use crate::analysis::{
    DensityProfile, Subadditivity, TranslationCheck, TranslationReport, Verdict, WeakApReport,
};
use crate::numeric::fmt_rational;

struct Report(String);

impl Report {
    fn new(kind: &str) -> Self {
        Report(format!("rpt 1\nkind {kind}\n"))
    }

    fn line(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.0.push_str(key);
        let v = value.as_ref();
        if !v.is_empty() {
            self.0.push(' ');
            self.0.push_str(v);
        }
        self.0.push('\n');
        self
    }
}

pub fn density_report(p: &DensityProfile) -> String {
    let mut r = Report::new("density");
    r.line("epsilon", fmt_rational(&p.epsilon));
    r.line("exact", p.exact.to_string());
    for s in &p.samples {
        r.line("sample", join_rationals([&s.radius, &s.d_min, &s.d_max]));
    }
    match &p.verdict {
        Verdict::Converged {
            density,
            eps_achieved,
        } => r.line(
            "verdict",
            format!("converged {}", join_rationals([density, eps_achieved])),
        ),
        Verdict::Inconclusive => r.line("verdict", "inconclusive"),
    };
    r.line(
        "r_eps",
        p.r_eps
            .as_ref()
            .map(fmt_rational)
            .unwrap_or_else(|| "none".into()),
    );
    r.0
}

/// CSV of the samples of a profile: `radius,d_min,d_max`.
pub fn density_csv(p: &DensityProfile) -> String {
    let mut out = String::from("radius,d_min,d_max\n");
    for s in &p.samples {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_rational(&s.radius),
            fmt_rational(&s.d_min),
            fmt_rational(&s.d_max)
        ));
    }
    out
}

pub fn translation_report(t: &TranslationReport) -> String {
    let mut r = Report::new("translations");
    r.line("epsilon", fmt_rational(&t.epsilon))
        .line("r_eps", fmt_rational(&t.r_eps))
        .line("r_max", fmt_rational(&t.r_max))
        .line(
            "domain",
            format!(
                "{} {}",
                join_rationals(t.domain.center.coords()),
                fmt_rational(&t.domain.radius)
            ),
        )
        .line(
            "ladder",
            "geometric ratio 2 from r_eps to domain_radius - |v| - r_eps",
        )
        .line("candidates", t.candidates.to_string())
        .line("accepted", t.translations.len().to_string())
        .line("largest_gap", fmt_rational(&t.largest_gap))
        .line("exhaustive_below", fmt_rational(&t.exhaustive_below));
    for v in t.translations.iter() {
        r.line("v", join_rationals(v.coords()));
    }
    r.0
}

pub fn check_report(c: &TranslationCheck) -> String {
    let mut r = Report::new("translation_check");
    r.line("v", join_rationals(c.v.coords()))
        .line("accepted", c.accepted.to_string())
        .line("exact", c.exact.to_string());
    for (radius, d) in &c.samples {
        r.line("rung", join_rationals([radius, d]));
    }
    r.0
}

pub fn weak_ap_report(w: &WeakApReport) -> String {
    let mut r = Report::new("weakap");
    r.line("epsilon", fmt_rational(&w.epsilon))
        .line("radius", fmt_rational(&w.radius))
        .line("pairs", w.pairs.len().to_string())
        .line("worst", fmt_rational(&w.worst))
        .line("passes", w.passes.to_string());
    for p in &w.pairs {
        r.line(
            "pair",
            format!(
                "x {} y {} v {} value {}",
                join_rationals(p.x.coords()),
                join_rationals(p.y.coords()),
                join_rationals(p.v.coords()),
                fmt_rational(&p.value)
            ),
        );
    }
    r.0
}

pub fn subadditivity_report(s: &Subadditivity) -> String {
    let mut r = Report::new("subadditivity");
    r.line("lhs", fmt_rational(&s.lhs))
        .line("rhs", fmt_rational(&s.rhs))
        .line("terms", join_rationals(&s.terms))
        .line("holds", s.holds.to_string())
        .line("exact", s.exact.to_string());
    r.0
}
