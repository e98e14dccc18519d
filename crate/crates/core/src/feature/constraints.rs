use crate::lang::ast::{BinOp, Expr, RelationKind};

use super::FeatureConstraint;

fn present(f: &str) -> Expr {
    Expr::name(&format!("{f}.present"))
}

fn paren(e: Expr) -> Expr {
    Expr::paren(e)
}

/// The boolean formula of a constraint over `<F>.present` variables.
pub fn constraint_formula(c: &FeatureConstraint) -> Expr {
    let p = &c.parent;
    match c.kind {
        RelationKind::Root => Expr::bin(BinOp::Iff, present(p), Expr::Bool(true)),
        RelationKind::Mandatory => Expr::bin(BinOp::Iff, present(p), present(&c.children[0])),
        RelationKind::Optional => Expr::bin(BinOp::Implies, present(&c.children[0]), present(p)),
        RelationKind::Requires => Expr::bin(BinOp::Implies, present(p), present(&c.children[0])),
        RelationKind::Excludes => Expr::not(paren(Expr::bin(
            BinOp::And,
            present(p),
            present(&c.children[0]),
        ))),
        RelationKind::Or => {
            let alts = Expr::fold(
                BinOp::Or,
                c.children.iter().map(|f| present(f)),
                Expr::Bool(false),
            );
            let rhs = if c.children.len() > 1 { paren(alts) } else { alts };
            Expr::bin(BinOp::Iff, present(p), rhs)
        }
        RelationKind::Alternative => {
            if c.children.len() == 1 {
                return Expr::bin(BinOp::Iff, present(&c.children[0]), present(p));
            }
            let terms = c.children.iter().enumerate().map(|(i, fi)| {
                let others = c
                    .children
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, fj)| Expr::not(paren(present(fj))))
                    .chain(std::iter::once(present(p)));
                let body = Expr::fold(BinOp::And, others, Expr::Bool(true));
                paren(Expr::bin(BinOp::Iff, present(fi), paren(body)))
            });
            Expr::fold(BinOp::And, terms, Expr::Bool(true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::printer::print_expr;

    fn formula(kind: RelationKind, parent: &str, children: &[&str]) -> String {
        print_expr(&constraint_formula(&FeatureConstraint::new(kind, parent, children)))
    }

    #[test]
    fn constraint_formulas_print_in_source_syntax() {
        assert_eq!(
            formula(RelationKind::Excludes, "FD", &["FP"]),
            "not(FD.present and FP.present)"
        );
        assert_eq!(
            formula(RelationKind::Alternative, "FO", &["FE", "FD"]),
            "(FE.present <=> (not(FD.present) and FO.present)) and (FD.present <=> (not(FE.present) and FO.present))"
        );
        assert_eq!(formula(RelationKind::Root, "F0", &[]), "F0.present <=> true");
        assert_eq!(formula(RelationKind::Mandatory, "FM", &["FS"]), "FM.present <=> FS.present");
        assert_eq!(formula(RelationKind::Optional, "FM", &["FR"]), "FR.present => FM.present");
        assert_eq!(formula(RelationKind::Requires, "FP", &["FR"]), "FP.present => FR.present");
        assert_eq!(
            formula(RelationKind::Or, "F", &["F1", "F2"]),
            "F.present <=> (F1.present or F2.present)"
        );
    }
}
