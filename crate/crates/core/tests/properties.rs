use proptest::prelude::*;

use rfgrowth::neumann::GroupContext;
use rfgrowth::perm::Permutation;
use rfgrowth::seqgen::GrowthProfile;
use rfgrowth::words::{Letter, Word};
use rfgrowth::wreath::WreathElement;

fn perm(deg: usize) -> impl Strategy<Value = Permutation> {
    Just((0..deg).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop::sample::select(Letter::ALL.to_vec()), 0..max)
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    letters(max).prop_map(Word::free_reduce)
}

proptest! {
    #[test]
    fn permutation_group_laws(p in perm(9), q in perm(9), r in perm(9)) {
        let e = Permutation::identity(9).unwrap();
        let pq_r = p.compose(&q).unwrap().compose(&r).unwrap();
        let p_qr = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(pq_r, p_qr);
        prop_assert_eq!(p.compose(&e).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(p.compose(&q).unwrap().is_even(), p.is_even() == q.is_even());
        for x in 0..9 {
            prop_assert_eq!(p.compose(&q).unwrap().apply(x), p.apply(q.apply(x)));
        }
    }

    #[test]
    fn free_reduction_is_idempotent(ls in letters(40)) {
        let w = Word::free_reduce(ls.clone());
        prop_assert!(Word::is_reduced(w.letters()));
        prop_assert_eq!(Word::free_reduce(w.letters().to_vec()), w.clone());
        prop_assert!(w.concat(&w.inverse()).is_empty());
        // reduction does not change the lamplighter value
        let mut raw = WreathElement::identity();
        for l in ls {
            raw.mul_letter(l);
        }
        prop_assert_eq!(raw, WreathElement::eval(&w));
    }

    #[test]
    fn lamplighter_evaluation_is_a_homomorphism(u in word(30), v in word(30)) {
        let uv = WreathElement::eval(&u.concat(&v));
        prop_assert_eq!(uv, WreathElement::eval(&u).mul(&WreathElement::eval(&v)));
        prop_assert_eq!(WreathElement::eval(&u.inverse()), WreathElement::eval(&u).inverse());
    }

    #[test]
    fn coordinate_evaluation_is_a_homomorphism(u in word(20), v in word(20), m in 1u64..8) {
        let ctx = GroupContext::new(GrowthProfile::toy());
        let lhs = ctx.coordinate_eval(&u.concat(&v), m).unwrap();
        let rhs = ctx.coordinate_eval(&u, m).unwrap().compose(&ctx.coordinate_eval(&v, m).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(ctx.coordinate_eval_sparse(&u.concat(&v), m).unwrap().to_dense(), lhs);
    }

    #[test]
    fn equality_is_symmetric_and_respects_products(u in word(10), v in word(10)) {
        let ctx = GroupContext::new(GrowthProfile::toy());
        let e = ctx.equal(&u, &v).unwrap();
        prop_assert_eq!(e, ctx.equal(&v, &u).unwrap());
        prop_assert_eq!(e, ctx.is_trivial(&u.concat(&v.inverse())).unwrap());
        prop_assert!(ctx.equal(&u, &u).unwrap());
    }
}

#[test]
fn shipped_configs_parse() {
    use rfgrowth::cli::RunConfig;
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/");
    let toy = RunConfig::from_json(&std::fs::read_to_string(format!("{dir}toy.json")).unwrap()).unwrap();
    assert_eq!(toy.profile, GrowthProfile::toy());
    let builtin =
        RunConfig::from_json(&std::fs::read_to_string(format!("{dir}builtin.json")).unwrap()).unwrap();
    assert_eq!(builtin.profile, GrowthProfile::builtin(1.0, 1.0));
}
