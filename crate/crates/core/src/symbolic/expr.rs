//! Turning state predicates back into model expressions.

use rustc_hash::FxHashMap;

use super::bdd::{Bdd, FALSE, TRUE};
use super::encode::{cur, SlotKind, SymbolicModel};
use crate::lang::ast::BinOp;
use crate::model::{Expr, Type};

impl SymbolicModel<'_> {
    fn slot_of_bit(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.num_bits as usize];
        for (s, slot) in self.slots.iter().enumerate() {
            for &b in &slot.bits {
                out[b as usize] = s;
            }
        }
        out
    }

    /// Cofactor of `f` with slot `s` fixed to `code`.
    fn slot_cofactor(&self, f: Bdd, s: usize, code: u64) -> Bdd {
        let bits = &self.slots[s].bits;
        let n = bits.len();
        let mut g = f;
        while !self.store.is_terminal(g) {
            let v = self.store.var(g);
            let Some(i) = bits.iter().position(|&b| cur(b) == v) else {
                break;
            };
            g = if (code >> (n - 1 - i)) & 1 == 1 {
                self.store.high(g)
            } else {
                self.store.low(g)
            };
        }
        g
    }

    /// Predicate "slot value is one of `codes`".
    fn slot_predicate(&self, s: usize, codes: &[u64]) -> Expr {
        let slot = &self.slots[s];
        let all = slot.size as usize;
        match slot.kind {
            SlotKind::Location(a) => {
                let loc = |c: u64| Expr::Loc(a, c as usize);
                if codes.len() * 2 <= all || codes.len() == 1 {
                    Expr::disjunction(codes.iter().map(|&c| loc(c)))
                } else {
                    let rest = (0..slot.size).filter(|c| !codes.contains(c)).map(loc);
                    Expr::not(Expr::disjunction(rest))
                }
            }
            SlotKind::Var(v) => {
                let var = Expr::Var(v);
                let ty = self.model.vars[v].ty;
                if ty == Type::Bool {
                    return if codes == [1] { var } else { Expr::not(var) };
                }
                let value = |c: u64| slot.offset + c as i64;
                let literal = |x: i64| match ty {
                    Type::Enum(e) => Expr::Enum(e, x as u32),
                    _ => Expr::Int(x),
                };
                let eq = |x: i64| Expr::Bin(BinOp::Eq, Box::new(var.clone()), Box::new(literal(x)));
                let contiguous = codes.windows(2).all(|w| w[1] == w[0] + 1);
                if codes.len() == 1 {
                    eq(value(codes[0]))
                } else if codes.len() + 1 == all {
                    let missing = (0..slot.size).find(|c| !codes.contains(c)).unwrap_or(0);
                    Expr::Bin(BinOp::Ne, Box::new(var.clone()), Box::new(literal(value(missing))))
                } else if contiguous && !matches!(ty, Type::Enum(_)) {
                    let lo = value(codes[0]);
                    let hi = value(*codes.last().unwrap_or(&codes[0]));
                    let ge = Expr::Bin(BinOp::Ge, Box::new(var.clone()), Box::new(Expr::Int(lo)));
                    let le = Expr::Bin(BinOp::Le, Box::new(var.clone()), Box::new(Expr::Int(hi)));
                    if codes[0] == 0 {
                        le
                    } else if codes.len() as u64 + codes[0] == slot.size {
                        ge
                    } else {
                        Expr::and(ge, le)
                    }
                } else {
                    Expr::disjunction(codes.iter().map(|&c| eq(value(c))))
                }
            }
        }
    }

    /// An expression over model variables and locations equivalent to `f` on valid codes.
    pub fn to_expr(&self, f: Bdd) -> Expr {
        let slot_of = self.slot_of_bit();
        let mut memo = FxHashMap::default();
        self.to_expr_rec(f, &slot_of, &mut memo)
    }

    fn to_expr_rec(&self, f: Bdd, slot_of: &[usize], memo: &mut FxHashMap<Bdd, Expr>) -> Expr {
        if f == TRUE {
            return Expr::Bool(true);
        }
        if f == FALSE {
            return Expr::Bool(false);
        }
        if let Some(e) = memo.get(&f) {
            return e.clone();
        }
        let s = slot_of[(self.store.var(f) / 2) as usize];
        let mut groups: Vec<(Bdd, Vec<u64>)> = Vec::new();
        for code in 0..self.slots[s].size {
            let g = self.slot_cofactor(f, s, code);
            match groups.iter_mut().find(|(r, _)| *r == g) {
                Some((_, codes)) => codes.push(code),
                None => groups.push((g, vec![code])),
            }
        }
        let expr = if groups.len() == 1 {
            self.to_expr_rec(groups[0].0, slot_of, memo)
        } else {
            let mut terms = Vec::new();
            for (g, codes) in &groups {
                if *g == FALSE {
                    continue;
                }
                let pred = self.slot_predicate(s, codes);
                let rest = self.to_expr_rec(*g, slot_of, memo);
                terms.push(Expr::and(pred, rest));
            }
            Expr::disjunction(terms)
        };
        memo.insert(f, expr.clone());
        expr
    }
}
