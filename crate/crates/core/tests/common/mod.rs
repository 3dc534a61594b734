#![allow(dead_code)]

use std::sync::Arc;

use nearcy::scalar::rat;
use nearcy::{Form, GaussianRational as G, GeneratorSpace, VectorSlot};
use num::rational::BigRational;
use proptest::prelude::*;

pub fn arb_rat() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

pub fn arb_g() -> impl Strategy<Value = G> {
    (arb_rat(), arb_rat()).prop_map(|(a, b)| G::new(a, b))
}

/// A random homogeneous form of degree `k` with up to four terms.
pub fn arb_form(space: Arc<GeneratorSpace>, k: usize) -> impl Strategy<Value = Form<G>> {
    let n = space.len();
    prop::collection::vec((prop::sample::subsequence((0..n).collect::<Vec<_>>(), k), arb_g()), 1..=4)
        .prop_map(move |terms| Form::from_terms(&space, terms))
}

pub fn arb_vector(space: Arc<GeneratorSpace>) -> impl Strategy<Value = VectorSlot<G>> {
    let n = space.len();
    prop::collection::vec(arb_g(), n).prop_map(move |c| VectorSlot::new(&space, c.into_iter().enumerate()))
}

pub fn sign(odd: bool) -> G {
    if odd {
        G::from_int(-1)
    } else {
        G::one()
    }
}
