//! String rewriting over a generator alphabet: normal forms and
//! critical-pair confluence checking.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Generator, GeneratorAlphabet, Word};

pub mod group;
pub mod symbolic;

/// Default cap on rule applications in a single normalization.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

/// Reduction order every rule must strictly decrease.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionOrder {
    /// Length first, then lexicographic in alphabet order.
    Shortlex,
    /// Recursive path order reading words right to left, with letter
    /// precedence given by alphabet order (earlier letters are larger).
    RecursivePath,
}

impl ReductionOrder {
    pub fn compare(self, u: &[Generator], v: &[Generator]) -> Ordering {
        match self {
            ReductionOrder::Shortlex => u.len().cmp(&v.len()).then_with(|| u.cmp(v)),
            ReductionOrder::RecursivePath => {
                if u == v {
                    Ordering::Equal
                } else if rpo_greater(u, v) {
                    Ordering::Greater
                } else if rpo_greater(v, u) {
                    Ordering::Less
                } else {
                    unreachable!("the recursive path order is total on words")
                }
            }
        }
    }
}

/// Words as monadic terms whose root is the last letter. A smaller
/// generator index means higher precedence.
fn rpo_greater(s: &[Generator], t: &[Generator]) -> bool {
    let Some((&f, s_rest)) = s.split_last() else {
        return false;
    };
    let Some((&g, t_rest)) = t.split_last() else {
        return true;
    };
    if s_rest == t || rpo_greater(s_rest, t) {
        return true;
    }
    match f.cmp(&g) {
        Ordering::Less => rpo_greater(s, t_rest),
        Ordering::Equal => rpo_greater(s_rest, t_rest),
        Ordering::Greater => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

/// An ordered list of rules over an alphabet.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    alphabet: GeneratorAlphabet,
    rules: Vec<Rule>,
    order: ReductionOrder,
}

impl RewritingSystem {
    pub fn new(alphabet: GeneratorAlphabet, rules: Vec<Rule>, order: ReductionOrder) -> Result<Self> {
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.is_empty() {
                return Err(Error::config(format!("rule {} has an empty left-hand side", i + 1)));
            }
            if order.compare(&r.lhs, &r.rhs) != Ordering::Greater {
                return Err(Error::config(format!(
                    "rule {} ({} -> {}) does not decrease the {:?} order",
                    i + 1,
                    alphabet.render_word(&r.lhs),
                    alphabet.render_word(&r.rhs),
                    order
                )));
            }
        }
        Ok(Self { alphabet, rules, order })
    }

    /// Parses a rules file.
    ///
    /// ```text
    /// alphabet: a A b B
    /// inverses: a A, b B
    /// order: shortlex
    /// b a -> a b
    /// a A ->
    /// ```
    ///
    /// `alphabet:` is required and comes first. Letters not paired under
    /// `inverses:` are their own inverses. `order:` is `shortlex` (default)
    /// or `rpo`. An empty right-hand side, `ε` or `1` is the empty word;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Vec<String>> = None;
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut order = ReductionOrder::Shortlex;
        let mut raw_rules: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: String| Error::Parse { line: line_no, reason };
            if let Some(rest) = line.strip_prefix("alphabet:") {
                if alphabet.is_some() {
                    return Err(parse_err("duplicate alphabet header".into()));
                }
                alphabet = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("inverses:") {
                for pair in rest.split(',') {
                    let toks: Vec<&str> = pair.split_whitespace().collect();
                    match toks.as_slice() {
                        [] => {}
                        [x, y] => pairs.push((x.to_string(), y.to_string())),
                        _ => return Err(parse_err(format!("bad inverse pair {pair:?}"))),
                    }
                }
            } else if let Some(rest) = line.strip_prefix("order:") {
                order = match rest.trim() {
                    "shortlex" => ReductionOrder::Shortlex,
                    "rpo" | "recursive-path" => ReductionOrder::RecursivePath,
                    other => return Err(parse_err(format!("unknown order {other:?}"))),
                };
            } else if let Some((lhs, rhs)) = line.split_once("->") {
                if alphabet.is_none() {
                    return Err(parse_err("rule before the alphabet header".into()));
                }
                raw_rules.push((line_no, lhs.to_string(), rhs.to_string()));
            } else {
                return Err(parse_err(format!("expected a header or `lhs -> rhs`, got {line:?}")));
            }
        }
        let symbols = alphabet.ok_or(Error::Parse {
            line: 1,
            reason: "missing `alphabet:` header".into(),
        })?;
        let mut inverse: Vec<usize> = (0..symbols.len()).collect();
        for (x, y) in &pairs {
            let find = |s: &String| {
                symbols
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| Error::config(format!("inverse pair names unknown letter {s:?}")))
            };
            let (i, j) = (find(x)?, find(y)?);
            inverse[i] = j;
            inverse[j] = i;
        }
        let alphabet = GeneratorAlphabet::new(symbols, inverse)?;
        let mut rules = Vec::with_capacity(raw_rules.len());
        for (line, lhs, rhs) in raw_rules {
            let word = |text: &str| {
                alphabet.parse_word(text).map_err(|e| Error::Parse {
                    line,
                    reason: e.to_string(),
                })
            };
            rules.push(Rule {
                lhs: word(&lhs)?,
                rhs: word(&rhs)?,
            });
        }
        Self::new(alphabet, rules, order)
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn order(&self) -> ReductionOrder {
        self.order
    }

    /// Rewrites `word` to an irreducible word, applying at each step the
    /// first rule (in file order) whose left side ends at the leftmost
    /// possible position.
    pub fn normalize_with_budget(&self, word: &[Generator], step_budget: u64) -> Result<Word> {
        let mut done: Word = Vec::with_capacity(word.len());
        let mut pending: Word = word.iter().rev().copied().collect();
        let mut steps = 0u64;
        while let Some(x) = pending.pop() {
            done.push(x);
            if let Some(rule) = self.rules.iter().find(|r| done.ends_with(&r.lhs)) {
                steps += 1;
                if steps > step_budget {
                    return Err(Error::budget(format!(
                        "normalization exceeded {step_budget} rewriting steps"
                    )));
                }
                done.truncate(done.len() - rule.lhs.len());
                pending.extend(rule.rhs.iter().rev());
            }
        }
        Ok(done)
    }

    pub fn normalize(&self, word: &[Generator]) -> Result<Word> {
        self.normalize_with_budget(word, DEFAULT_STEP_BUDGET)
    }

    pub fn is_irreducible(&self, word: &[Generator]) -> bool {
        !self
            .rules
            .iter()
            .any(|r| word.windows(r.lhs.len()).any(|w| w == r.lhs.as_slice()))
    }

    /// All critical pairs in deterministic order: by left rule, right
    /// rule, then position.
    fn critical_pairs(&self) -> Vec<PendingPair> {
        let mut out = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            for (j, rj) in self.rules.iter().enumerate() {
                let (li, lj) = (&ri.lhs, &rj.lhs);
                // Overlap: li = x y, lj = y z with x, y, z nonempty.
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] == lj[..k] {
                        let x = &li[..li.len() - k];
                        let z = &lj[k..];
                        let mut word = li.clone();
                        word.extend_from_slice(z);
                        let mut left = ri.rhs.clone();
                        left.extend_from_slice(z);
                        let mut right = x.to_vec();
                        right.extend_from_slice(&rj.rhs);
                        out.push(PendingPair {
                            kind: PairKind::Overlap,
                            rules: (i, j),
                            position: li.len() - k,
                            word,
                            left,
                            right,
                        });
                    }
                }
                // Inclusion: lj is a factor of li.
                if i != j && lj.len() <= li.len() {
                    for p in 0..=li.len() - lj.len() {
                        if li[p..p + lj.len()] == lj[..] {
                            let mut right = li[..p].to_vec();
                            right.extend_from_slice(&rj.rhs);
                            right.extend_from_slice(&li[p + lj.len()..]);
                            out.push(PendingPair {
                                kind: PairKind::Inclusion,
                                rules: (i, j),
                                position: p,
                                word: li.clone(),
                                left: ri.rhs.clone(),
                                right,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Normalizes both reducts of every critical pair, up to `max_pairs`
    /// pairs.
    pub fn critical_pair_check(&self, max_pairs: usize) -> ConfluenceReport {
        let all = self.critical_pairs();
        let total = all.len();
        let take = total.min(max_pairs);
        let results: Vec<std::result::Result<Option<CriticalPair>, Error>> = all[..take]
            .par_iter()
            .map(|p| {
                let a = self.normalize(&p.left)?;
                let b = self.normalize(&p.right)?;
                Ok((a != b).then(|| CriticalPair {
                    kind: p.kind,
                    left_rule: p.rules.0 + 1,
                    right_rule: p.rules.1 + 1,
                    position: p.position,
                    word: self.alphabet.render_word(&p.word),
                    left_normal_form: self.alphabet.render_word(&a),
                    right_normal_form: self.alphabet.render_word(&b),
                }))
            })
            .collect();
        let mut unresolved = Vec::new();
        let mut step_budget_hit = false;
        for r in results {
            match r {
                Ok(Some(pair)) => unresolved.push(pair),
                Ok(None) => {}
                Err(_) => step_budget_hit = true,
            }
        }
        let complete = take == total && !step_budget_hit;
        let status = if !unresolved.is_empty() {
            ConfluenceStatus::NotConfluent
        } else if complete {
            ConfluenceStatus::Confluent
        } else {
            ConfluenceStatus::UnknownBudgetExhausted
        };
        ConfluenceReport {
            status,
            rules: self.rules.len(),
            pairs_total: total,
            pairs_checked: take,
            unresolved_pairs: unresolved,
        }
    }
}

impl fmt::Display for RewritingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(
                f,
                "{} -> {}",
                self.alphabet.render_word(&r.lhs),
                self.alphabet.render_word(&r.rhs)
            )?;
        }
        Ok(())
    }
}

struct PendingPair {
    kind: PairKind,
    rules: (usize, usize),
    position: usize,
    word: Word,
    left: Word,
    right: Word,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Overlap,
    Inclusion,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfluenceStatus {
    Confluent,
    NotConfluent,
    UnknownBudgetExhausted,
}

/// A critical pair whose two reducts have different normal forms. Rule
/// numbers are 1-based positions in the system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    pub kind: PairKind,
    pub left_rule: usize,
    pub right_rule: usize,
    pub position: usize,
    pub word: String,
    pub left_normal_form: String,
    pub right_normal_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub status: ConfluenceStatus,
    pub rules: usize,
    pub pairs_total: usize,
    pub pairs_checked: usize,
    pub unresolved_pairs: Vec<CriticalPair>,
}

/// Rewriting systems shipped with the crate.
pub mod shipped {
    use super::RewritingSystem;

    pub const Z2: &str = include_str!("../../data/z2.rules");
    pub const HEISENBERG: &str = include_str!("../../data/heisenberg.rules");
    pub const FREE2: &str = include_str!("../../data/free2.rules");

    pub fn z2() -> RewritingSystem {
        RewritingSystem::parse(Z2).expect("shipped system parses")
    }

    pub fn heisenberg() -> RewritingSystem {
        RewritingSystem::parse(HEISENBERG).expect("shipped system parses")
    }

    pub fn free2() -> RewritingSystem {
        RewritingSystem::parse(FREE2).expect("shipped system parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(sys: &RewritingSystem, text: &str) -> Word {
        sys.alphabet().parse_word(text).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        let f = shipped::free2();
        assert_eq!(f.normalize(&w(&f, "a A b")).unwrap(), w(&f, "b"));
        assert_eq!(f.critical_pair_check(1000).status, ConfluenceStatus::Confluent);
        let one = RewritingSystem::parse("alphabet: a A\ninverses: a A\na A ->\nA a ->\n").unwrap();
        let report = one.critical_pair_check(100);
        assert_eq!(report.status, ConfluenceStatus::Confluent);
        assert!(report.unresolved_pairs.is_empty());
    }

    #[test]
    fn z2_examples() {
        let z = shipped::z2();
        assert_eq!(z.normalize(&w(&z, "b a b A")).unwrap(), w(&z, "b b"));
        let report = z.critical_pair_check(10_000);
        assert_eq!(report.status, ConfluenceStatus::Confluent);
        assert!(report.unresolved_pairs.is_empty());
    }

    #[test]
    fn broken_system_reports_witness() {
        let sys = RewritingSystem::parse("alphabet: a b\na b -> a\na b -> b\n").unwrap();
        let report = sys.critical_pair_check(100);
        assert_eq!(report.status, ConfluenceStatus::NotConfluent);
        assert!(report.unresolved_pairs.iter().all(|p| p.word == "a b"));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"not_confluent\""));
    }

    #[test]
    fn pair_budget_is_reported() {
        let z = shipped::z2();
        assert_eq!(
            z.critical_pair_check(1).status,
            ConfluenceStatus::UnknownBudgetExhausted
        );
    }

    #[test]
    fn rejects_non_decreasing_rules() {
        assert!(RewritingSystem::parse("alphabet: a b\na -> b\n").is_err());
        assert!(RewritingSystem::parse("alphabet: a b\nb a -> a b c\n").is_err());
        let err = RewritingSystem::parse("alphabet: a\n -> a\n").unwrap_err();
        assert!(err.to_string().contains("empty left-hand side"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = RewritingSystem::parse("alphabet: a\n\na -> q\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = RewritingSystem::parse("a -> \n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn step_budget_is_explicit() {
        let h = shipped::heisenberg();
        let word = w(&h, "b b b b a a a a");
        assert!(matches!(h.normalize_with_budget(&word, 3), Err(Error::Budget(_))));
        assert!(h.normalize(&word).is_ok());
    }

    #[test]
    fn heisenberg_rules_decrease_rpo_but_not_shortlex() {
        let h = shipped::heisenberg();
        assert_eq!(h.order(), ReductionOrder::RecursivePath);
        let lengthening = h.rules().iter().any(|r| r.rhs.len() > r.lhs.len());
        assert!(lengthening);
        assert_eq!(h.critical_pair_check(10_000).status, ConfluenceStatus::Confluent);
    }

    fn arb_word(n: u8, max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0..n).prop_map(Generator), 0..=max)
    }

    proptest! {
        #[test]
        fn rpo_is_a_strict_total_order(u in arb_word(4, 5), v in arb_word(4, 5), x in arb_word(4, 5)) {
            let o = ReductionOrder::RecursivePath;
            prop_assert_eq!(o.compare(&u, &v), o.compare(&v, &u).reverse());
            if o.compare(&u, &v) == Ordering::Greater && o.compare(&v, &x) == Ordering::Greater {
                prop_assert_eq!(o.compare(&u, &x), Ordering::Greater);
            }
            // Compatible with concatenation on both sides.
            if o.compare(&u, &v) == Ordering::Greater {
                let ux: Word = x.iter().chain(&u).chain(&x).copied().collect();
                let vx: Word = x.iter().chain(&v).chain(&x).copied().collect();
                prop_assert_eq!(o.compare(&ux, &vx), Ordering::Greater);
            }
        }

        #[test]
        fn normalize_is_idempotent(word in arb_word(6, 12)) {
            let h = shipped::heisenberg();
            let nf = h.normalize(&word).unwrap();
            prop_assert!(h.is_irreducible(&nf));
            prop_assert_eq!(h.normalize(&nf).unwrap(), nf);
        }

        #[test]
        fn normalize_respects_concatenation(u in arb_word(4, 10), v in arb_word(4, 10)) {
            let z = shipped::z2();
            let uv: Word = u.iter().chain(&v).copied().collect();
            let mut parts = z.normalize(&u).unwrap();
            parts.extend(z.normalize(&v).unwrap());
            prop_assert_eq!(z.normalize(&uv).unwrap(), z.normalize(&parts).unwrap());
        }
    }
}
