//! Induction tables of factorizations: grow a factorization one hyperplane at
//! a time, each step justified by a bijective restriction map and an
//! inductively factored restriction with the expected exponents.

use serde::Serialize;

use super::nice::{padded_exponents, restriction_map_unchecked};
use super::partition::Partition;
use super::session::Session;
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    /// π' on the hyperplanes added so far (positions in the whole arrangement).
    pub partition_before: Partition,
    pub exponents_before: Vec<usize>,
    /// Position of the added hyperplane.
    #[serde(serialize_with = "one_based_index")]
    pub added: usize,
    pub form: String,
    /// π'' with each image labelled by its preimage.
    pub partition_restricted: Partition,
    pub exponents_restricted: Vec<usize>,
}

fn one_based_index<S: serde::Serializer>(i: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*i as u64 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionTable {
    pub rows: Vec<TableRow>,
    pub final_partition: Partition,
    pub final_exponents: Vec<usize>,
}

/// No admissible block at some step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stuck {
    /// 1-based row number.
    pub step: usize,
    #[serde(serialize_with = "one_based_index")]
    pub hyperplane: usize,
    pub partition_before: Partition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TableOutcome {
    Table(InductionTable),
    Stuck(Stuck),
}

struct Builder<'a> {
    session: &'a Session,
    a: &'a Arrangement,
    order: Vec<usize>,
    target: Option<&'a Partition>,
    deepest: Option<Stuck>,
}

impl Session {
    /// Build an induction table adding the hyperplanes of `order` (positions
    /// in `a`) to the seed. With a target partition of `a` every step is
    /// forced into the target's block; otherwise blocks are tried lowest
    /// index first, a new block last, with backtracking.
    pub fn emit_induction_table(
        &self,
        a: &Arrangement,
        order: &[usize],
        seed: Option<(&Arrangement, &Partition)>,
        target: Option<&Partition>,
    ) -> Result<TableOutcome> {
        let (start, start_blocks) = self.seed_positions(a, seed)?;
        let mut seen = vec![false; a.len()];
        for &i in &start {
            seen[i] = true;
        }
        for &i in order {
            if i >= a.len() {
                return Err(Error::BadOrder(format!("hyperplane {} does not exist", i + 1)));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::BadOrder(format!("hyperplane {} occurs twice or belongs to the seed", i + 1)));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::BadOrder(format!("hyperplane {} is missing", i + 1)));
        }
        if let Some(t) = target {
            t.validate(a.len())?;
            let mut want: Vec<Vec<usize>> = t.induced(&sorted(&start)).into_blocks();
            let mut have = start_blocks.clone();
            want.sort();
            have.sort();
            if want != have {
                return Err(Error::BadSeed("seed partition disagrees with the target partition".into()));
            }
        }
        let mut b = Builder { session: self, a, order: order.to_vec(), target, deepest: None };
        let mut rows = Vec::new();
        let mut blocks = start_blocks;
        if b.extend(0, start, &mut blocks, &mut rows)? {
            let final_partition = Partition::new(blocks);
            let final_exponents = padded_exponents(a.dim(), &final_partition.sizes());
            Ok(TableOutcome::Table(InductionTable { rows, final_partition, final_exponents }))
        } else {
            Ok(TableOutcome::Stuck(b.deepest.expect("a failed search records where")))
        }
    }

    fn seed_positions(&self, a: &Arrangement, seed: Option<(&Arrangement, &Partition)>) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
        let Some((s, p)) = seed else {
            return Ok((Vec::new(), Vec::new()));
        };
        if s.field() != a.field() || s.dim() != a.dim() {
            return Err(Error::BadSeed("seed lives in a different space".into()));
        }
        p.validate(s.len()).map_err(|e| Error::BadSeed(e.to_string()))?;
        let pos: Vec<usize> = s
            .hyperplanes()
            .iter()
            .enumerate()
            .map(|(k, h)| a.position(h).ok_or_else(|| Error::BadSeed(format!("seed hyperplane {} is not in the arrangement", k + 1))))
            .collect::<Result<_>>()?;
        if !self.ifac_pair(s, p)? {
            return Err(Error::BadSeed("seed partition is not an inductive factorization".into()));
        }
        let blocks = p.blocks().iter().map(|b| b.iter().map(|&i| pos[i]).collect()).collect();
        Ok((pos, blocks))
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

impl Builder<'_> {
    fn extend(&mut self, step: usize, cur: Vec<usize>, blocks: &mut Vec<Vec<usize>>, rows: &mut Vec<TableRow>) -> Result<bool> {
        if step == self.order.len() {
            return Ok(true);
        }
        let h = self.order[step];
        let options: Vec<usize> = match self.target {
            Some(t) => {
                let tb = &t.blocks()[t.block_of(h).expect("validated")];
                vec![blocks.iter().position(|b| tb.binary_search(&b[0]).is_ok()).unwrap_or(blocks.len())]
            }
            None => (0..=blocks.len()).collect(),
        };
        let mut next = cur.clone();
        next.push(h);
        for k in options {
            if let Some(row) = self.try_row(&next, blocks, k)? {
                if k == blocks.len() {
                    blocks.push(vec![h]);
                } else {
                    blocks[k].push(h);
                }
                rows.push(row);
                if self.extend(step + 1, next.clone(), blocks, rows)? {
                    return Ok(true);
                }
                rows.pop();
                if blocks[k].len() == 1 {
                    blocks.pop();
                } else {
                    blocks[k].pop();
                }
            }
        }
        if self.deepest.as_ref().is_none_or(|d| d.step <= step) {
            self.deepest = Some(Stuck { step: step + 1, hyperplane: h, partition_before: Partition::new(blocks.clone()) });
        }
        Ok(false)
    }

    /// The row adding the last element of `next` to block `k` (a new block
    /// when `k == blocks.len()`), if admissible.
    fn try_row(&self, next: &[usize], blocks: &[Vec<usize>], k: usize) -> Result<Option<TableRow>> {
        let h = *next.last().unwrap();
        let ai = self.a.subarrangement(next);
        let local = |g: usize| next.iter().position(|&x| x == g).unwrap();
        let mut new_blocks: Vec<Vec<usize>> = blocks.to_vec();
        if k == new_blocks.len() {
            new_blocks.push(vec![h]);
        } else {
            new_blocks[k].push(h);
        }
        let local_p = Partition::new(new_blocks.iter().map(|b| b.iter().map(|&g| local(g)).collect()).collect());
        let pivot = next.len() - 1;
        let map = restriction_map_unchecked(&ai, &local_p, pivot, k)?;
        let Some(q) = &map.induced else {
            return Ok(None);
        };
        if !self.session.ifac_pair(&map.triple.restricted, q)? {
            return Ok(None);
        }
        let rest: Vec<Vec<usize>> = new_blocks.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, b)| b.clone()).collect();
        let rest_sizes: Vec<usize> = rest.iter().map(Vec::len).collect();
        let expected = padded_exponents(self.a.dim() - 1, &rest_sizes);
        if self.session.inductive_exponents(&map.triple.restricted).as_ref() != Some(&expected) {
            return Ok(None);
        }
        let before = Partition::new(blocks.to_vec());
        Ok(Some(TableRow {
            exponents_before: padded_exponents(self.a.dim(), &before.sizes()),
            partition_before: before,
            added: h,
            form: self.a.form_string(h),
            partition_restricted: Partition::new(rest),
            exponents_restricted: expected,
        }))
    }
}

const MACRON: char = '\u{0304}';

fn render_blocks(p: &Partition, bar: bool) -> String {
    if p.is_empty() {
        return "∅".into();
    }
    p.blocks()
        .iter()
        .map(|b| {
            let items: Vec<String> = b
                .iter()
                .map(|i| {
                    let s = (i + 1).to_string();
                    if bar {
                        s.chars().flat_map(|c| [c, MACRON]).collect()
                    } else {
                        s
                    }
                })
                .collect();
            format!("{{{}}}", items.join(", "))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_exps(e: &[usize]) -> String {
    e.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn width(s: &str) -> usize {
    s.chars().filter(|c| !('\u{0300}'..='\u{036f}').contains(c)).count()
}

impl InductionTable {
    /// Aligned plain text, one line per row plus the header and final row.
    pub fn render(&self) -> String {
        let mut lines: Vec<[String; 5]> = vec![["π'".into(), "exp A'".into(), "α".into(), "π''".into(), "exp A''".into()]];
        for r in &self.rows {
            lines.push([
                render_blocks(&r.partition_before, false),
                render_exps(&r.exponents_before),
                r.form.clone(),
                render_blocks(&r.partition_restricted, true),
                render_exps(&r.exponents_restricted),
            ]);
        }
        lines.push([
            render_blocks(&self.final_partition, false),
            render_exps(&self.final_exponents),
            String::new(),
            String::new(),
            String::new(),
        ]);
        let mut w = [0usize; 5];
        for l in &lines {
            for (c, cell) in l.iter().enumerate() {
                w[c] = w[c].max(width(cell));
            }
        }
        let mut out = String::new();
        for (n, l) in lines.iter().enumerate() {
            let mut line = String::new();
            for (c, cell) in l.iter().enumerate() {
                line.push_str(cell);
                if c < 4 {
                    line.push_str(&" ".repeat(w[c] - width(cell) + 2));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
            if n == 0 {
                let total: usize = w.iter().sum::<usize>() + 8;
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linform::parse_defining_polynomial;
    use crate::scalar::FieldSpec;

    fn arr(poly: &str, n: usize) -> Arrangement {
        Arrangement::from_source(&parse_defining_polynomial(poly, FieldSpec::Rationals, n).unwrap()).unwrap()
    }

    #[test]
    fn boolean_table() {
        let s = Session::default();
        let a = arr("x y", 2);
        let TableOutcome::Table(t) = s.emit_induction_table(&a, &[0, 1], None, None).unwrap() else {
            panic!("boolean arrangement has a table");
        };
        assert_eq!(t.final_partition.to_string(), "1|2");
        assert_eq!(t.final_exponents, vec![1, 1]);
        assert_eq!(t.rows[1].partition_restricted.to_string(), "1");
    }

    #[test]
    fn bad_orders() {
        let s = Session::default();
        let a = arr("x y", 2);
        assert!(matches!(s.emit_induction_table(&a, &[0], None, None), Err(Error::BadOrder(_))));
        assert!(matches!(s.emit_induction_table(&a, &[0, 0], None, None), Err(Error::BadOrder(_))));
    }

    #[test]
    fn macron_width() {
        assert_eq!(width("{1\u{304}0\u{304}}"), 4);
    }
}
