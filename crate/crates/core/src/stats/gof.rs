//! Total variation and chi-square goodness of fit against exact laws.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::empirical::EmpiricalDist;
use crate::error::{arg, Result};
use crate::hlproc::ExactLaw;
use crate::rational::to_f64;
use crate::symfunc::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Tv,
    Chi2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub kind: Statistic,
    pub value: f64,
    pub dof: Option<usize>,
    pub p_value: Option<f64>,
    /// Exact mass of the reference law outside its listed atoms.
    pub tail_mass: f64,
    pub note: String,
    pub threshold: f64,
    pub pass: bool,
    /// Set when fewer than two cells survive pooling.
    pub degenerate: bool,
}

impl GofReport {
    pub fn markdown(&self, title: &str) -> String {
        let mut s = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "### {title}: {verdict}");
        let _ = writeln!(s, "| field | value |\n|---|---|");
        let _ = writeln!(s, "| statistic | {:?} |", self.kind);
        let _ = writeln!(s, "| value | {:.6} |", self.value);
        if let Some(d) = self.dof {
            let _ = writeln!(s, "| dof | {d} |");
        }
        if let Some(p) = self.p_value {
            let _ = writeln!(s, "| p-value | {p:.6} |");
        }
        let _ = writeln!(s, "| threshold | {} |", self.threshold);
        let _ = writeln!(s, "| tail mass | {:.3e} |", self.tail_mass);
        if !self.note.is_empty() {
            let _ = writeln!(s, "| note | {} |", self.note);
        }
        s
    }
}

fn nonempty(emp: &EmpiricalDist) -> Result<()> {
    if emp.total == 0 {
        return arg("empirical distribution is empty");
    }
    Ok(())
}

/// `½ Σ_s |emp(s) - p(s)|` over listed and observed atoms, plus the
/// unlisted mass of `exact` in full (an upper bound on its contribution).
pub fn tv_distance(emp: &EmpiricalDist, exact: &ExactLaw) -> Result<f64> {
    nonempty(emp)?;
    let keys: BTreeSet<&Signature> = emp.counts.keys().chain(exact.atoms.keys()).collect();
    let half: f64 = keys.into_iter().map(|s| (emp.freq(s) - to_f64(&exact.prob(s))).abs()).sum::<f64>() / 2.0;
    Ok((half + to_f64(&exact.tail)).min(1.0))
}

/// Total variation between two samples.
pub fn tv_two_sample(a: &EmpiricalDist, b: &EmpiricalDist) -> Result<f64> {
    nonempty(a)?;
    nonempty(b)?;
    let keys: BTreeSet<&Signature> = a.counts.keys().chain(b.counts.keys()).collect();
    Ok(keys.into_iter().map(|s| (a.freq(s) - b.freq(s)).abs()).sum::<f64>() / 2.0)
}

/// Merges cells (sorted by decreasing weight) until every pooled cell has
/// weight at least `min`; a light remainder joins the last full cell.
fn pool<T: Copy>(mut cells: Vec<(f64, T)>, min: f64, mut add: impl FnMut(T, T) -> T) -> Vec<(f64, T)> {
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<(f64, T)> = Vec::new();
    let mut cur: Option<(f64, T)> = None;
    for (w, v) in cells {
        cur = Some(match cur {
            None => (w, v),
            Some((cw, cv)) => (cw + w, add(cv, v)),
        });
        if let Some((cw, cv)) = cur {
            if cw >= min {
                out.push((cw, cv));
                cur = None;
            }
        }
    }
    if let Some((cw, cv)) = cur {
        match out.last_mut() {
            Some(last) => *last = (last.0 + cw, add(last.1, cv)),
            None => out.push((cw, cv)),
        }
    }
    out
}

fn chi2_sf(stat: f64, dof: usize) -> f64 {
    if stat <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64).map(|d| d.sf(stat)).unwrap_or(f64::NAN)
}

/// Pearson goodness of fit of `emp` against `exact`, cells pooled until the
/// expected count reaches `min_expected`. Observations outside the listed
/// atoms share one cell with the unlisted mass.
pub fn chi_square(emp: &EmpiricalDist, exact: &ExactLaw, min_expected: f64, threshold: f64) -> Result<GofReport> {
    nonempty(emp)?;
    let n = emp.total as f64;
    let mut cells: Vec<(f64, (f64, f64))> = exact
        .atoms
        .iter()
        .map(|(s, p)| {
            let e = to_f64(p) * n;
            (e, (e, emp.count(s) as f64))
        })
        .collect();
    let outside: u64 = emp.counts.iter().filter(|(s, _)| !exact.atoms.contains_key(*s)).map(|(_, c)| c).sum();
    let tail = to_f64(&exact.tail);
    if tail > 0.0 || outside > 0 {
        cells.push((tail * n, (tail * n, outside as f64)));
    }
    let pooled = pool(cells, min_expected, |a, b| (a.0 + b.0, a.1 + b.1));
    let mut report = GofReport {
        kind: Statistic::Chi2,
        value: 0.0,
        dof: None,
        p_value: None,
        tail_mass: tail,
        note: format!("{} cells after pooling to expected ≥ {min_expected}", pooled.len()),
        threshold,
        pass: false,
        degenerate: pooled.len() < 2,
    };
    if report.degenerate {
        return Ok(report);
    }
    let stat: f64 = pooled
        .iter()
        .map(|(_, (e, o))| if *e > 0.0 { (o - e) * (o - e) / e } else if *o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum();
    let dof = pooled.len() - 1;
    let p = chi2_sf(stat, dof);
    report.value = stat;
    report.dof = Some(dof);
    report.p_value = Some(p);
    report.pass = p >= threshold;
    Ok(report)
}

/// Chi-square test of homogeneity for two samples, cells pooled by their
/// combined count so that every expected count is at least `min_expected`.
pub fn chi_square_two_sample(a: &EmpiricalDist, b: &EmpiricalDist, min_expected: f64, threshold: f64) -> Result<GofReport> {
    nonempty(a)?;
    nonempty(b)?;
    let (na, nb) = (a.total as f64, b.total as f64);
    let n = na + nb;
    let keys: BTreeSet<&Signature> = a.counts.keys().chain(b.counts.keys()).collect();
    let cells: Vec<(f64, (f64, f64))> = keys
        .into_iter()
        .map(|s| {
            let (ca, cb) = (a.count(s) as f64, b.count(s) as f64);
            // The smaller expected count in the column is min(na, nb)/n of its total.
            ((ca + cb) * na.min(nb) / n, (ca, cb))
        })
        .collect();
    let pooled = pool(cells, min_expected, |x, y| (x.0 + y.0, x.1 + y.1));
    let mut report = GofReport {
        kind: Statistic::Chi2,
        value: 0.0,
        dof: None,
        p_value: None,
        tail_mass: 0.0,
        note: format!("two-sample, {} cells after pooling", pooled.len()),
        threshold,
        pass: false,
        degenerate: pooled.len() < 2,
    };
    if report.degenerate {
        return Ok(report);
    }
    let mut stat = 0.0;
    for (_, (ca, cb)) in &pooled {
        let col = ca + cb;
        let (ea, eb) = (col * na / n, col * nb / n);
        stat += (ca - ea).powi(2) / ea + (cb - eb).powi(2) / eb;
    }
    let dof = pooled.len() - 1;
    let p = chi2_sf(stat, dof);
    report.value = stat;
    report.dof = Some(dof);
    report.p_value = Some(p);
    report.pass = p >= threshold;
    Ok(report)
}

/// A TV report against a threshold.
pub fn tv_report(emp: &EmpiricalDist, exact: &ExactLaw, threshold: f64) -> Result<GofReport> {
    let value = tv_distance(emp, exact)?;
    Ok(GofReport {
        kind: Statistic::Tv,
        value,
        dof: None,
        p_value: None,
        tail_mass: to_f64(&exact.tail),
        note: String::new(),
        threshold,
        pass: value <= threshold,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use std::collections::BTreeMap;

    fn s(v: i64) -> Signature {
        Signature::new(vec![v]).unwrap()
    }

    fn law(ps: &[(i64, i64, i64)]) -> ExactLaw {
        ExactLaw::from_atoms(ps.iter().map(|&(v, a, b)| (s(v), rat(a, b))).collect::<BTreeMap<_, _>>()).unwrap()
    }

    fn emp(cs: &[(i64, u64)]) -> EmpiricalDist {
        let mut e = EmpiricalDist::new();
        for &(v, c) in cs {
            for _ in 0..c {
                e.add(s(v));
            }
        }
        e
    }

    #[test]
    fn tv_extremes() {
        let l = law(&[(0, 1, 2), (1, 1, 2)]);
        assert_eq!(tv_distance(&emp(&[(0, 5), (1, 5)]), &l).unwrap(), 0.0);
        assert_eq!(tv_distance(&emp(&[(3, 4)]), &ExactLaw::point_mass(s(0))).unwrap(), 1.0);
        assert!(tv_distance(&EmpiricalDist::new(), &l).is_err());
    }

    #[test]
    fn chi_square_balanced_cells() {
        let l = law(&[(0, 1, 2), (1, 1, 2)]);
        let r = chi_square(&emp(&[(0, 50), (1, 50)]), &l, 5.0, 1e-3).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.p_value, Some(1.0));
        assert!(r.pass);
        let r = chi_square(&emp(&[(0, 5)]), &ExactLaw::point_mass(s(0)), 5.0, 1e-3).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn pooling_merges_light_cells() {
        let cells = vec![(3.0, 1), (10.0, 1), (6.0, 1), (1.0, 1), (0.5, 1)];
        let pooled = pool(cells, 5.0, |a, b| a + b);
        assert_eq!(pooled, vec![(10.0, 1), (10.5, 4)]);
    }

    #[test]
    fn two_sample_identical() {
        let a = emp(&[(0, 40), (1, 60)]);
        let r = chi_square_two_sample(&a, &a, 5.0, 1e-3).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert_eq!(tv_two_sample(&a, &a).unwrap(), 0.0);
    }
}
