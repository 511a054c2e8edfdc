mod common;

use common::*;
use heun_painleve::heun_class::{classify, mn_class_membership, swap_infinity, to_normal_form, HeunError, HeunOperator, TableRow, Variety};
use heun_painleve::polyalg::Var;
use heun_painleve::sing_analysis::HalfInt;
use proptest::prelude::*;

fn row() -> impl Strategy<Value = TableRow> {
    proptest::sample::select(TableRow::ALL.to_vec())
}

fn rank_multiset(op: &HeunOperator) -> Result<Vec<HalfInt>, HeunError> {
    Ok(classify(op)?.symbol.all())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn table_rows_classify_to_their_own_symbol(r in row(), cs in proptest::collection::vec(nonzero_rat(), 6), t in third_root()) {
        let op = instance(r, &cs, &t);
        prop_assert_eq!(r.match_shape(&op), Some(Variety::A));
        let c = classify(&op).unwrap();
        prop_assert_eq!(&c.symbol, &r.symbol());
        match to_normal_form(&op) {
            Ok(nf) => {
                prop_assert_eq!(classify(&nf.operator).unwrap().symbol, r.symbol());
                prop_assert_eq!(nf.trace.replay(&op.principal()).unwrap(), nf.operator.principal());
            }
            Err(e) if skip_heun(&e) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{}: {e}", r.label()))),
        }
    }

    #[test]
    fn normal_form_keeps_classification(op in grounded_op()) {
        let before = classify(&op).unwrap();
        match to_normal_form(&op) {
            Ok(nf) => {
                prop_assert_eq!(classify(&nf.operator).unwrap().symbol, before.symbol);
                prop_assert_eq!(nf.trace.replay(&op.principal()).unwrap(), nf.operator.principal());
            }
            Err(e) if skip_heun(&e) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn swap_keeps_class_and_ranks(op in origin_op()) {
        let sw = swap_infinity(&op).unwrap();
        if mn_class_membership(&op.principal(), 3).in_class {
            prop_assert!(mn_class_membership(&sw.principal(), 3).in_class);
        }
        prop_assert_eq!(rank_multiset(&op).unwrap(), rank_multiset(&sw).unwrap());
        // swapping twice returns the operator up to the leading constant
        let back = swap_infinity(&sw).unwrap();
        prop_assert_eq!(back.principal().p, op.principal().p);
    }

    #[test]
    fn rounded_ranks_sum_to_at_most_four(op in grounded_op()) {
        let m = mn_class_membership(&op.principal(), 3);
        prop_assert!(m.in_class && m.grounded);
        prop_assert!(classify(&op).unwrap().symbol.rounded_sum() <= 4);
        prop_assert!(op.sigma().num().degree_in(&Var::z()).unwrap_or(0) <= 3);
    }
}
