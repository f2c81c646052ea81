use proptest::prelude::*;

use super::*;

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        prop::sample::select(vec!["a", "b", "k0", "k12"]).prop_map(Term::constant),
    ]
}

fn leaf(language: Language) -> BoxedStrategy<Formula> {
    let atoms = prop_oneof![
        term().prop_map(|t| Formula::atom("P", vec![t])),
        (term(), term()).prop_map(|(s, t)| Formula::atom("R", vec![s, t])),
        (term(), term()).prop_map(|(s, t)| Formula::eq(s, t)),
        term().prop_map(Formula::existent),
    ];
    match language {
        Language::Negation => atoms.boxed(),
        Language::Falsum => prop_oneof![
            4 => atoms,
            1 => Just(Formula::Bot),
            1 => term().prop_map(|t| Formula::atom("P'", vec![t])),
            1 => (term(), term()).prop_map(|(s, t)| Formula::atom(PRIMED_IDENTITY, vec![s, t])),
            1 => term().prop_map(|t| Formula::atom(PRIMED_EXISTENCE, vec![t])),
        ]
        .boxed(),
    }
}

pub(crate) fn formula(language: Language) -> impl Strategy<Value = Formula> {
    let var = prop::sample::select(vec!["x", "y", "z"]);
    leaf(language).prop_recursive(5, 48, 2, move |inner| {
        let mut options = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::and(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::or(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::imp(a, b))
                .boxed(),
            (var.clone(), inner.clone())
                .prop_map(|(x, a)| Formula::forall(x, a))
                .boxed(),
            (var.clone(), inner.clone())
                .prop_map(|(x, a)| Formula::exists(x, a))
                .boxed(),
            (var.clone(), inner.clone(), inner.clone())
                .prop_map(|(x, a, b)| Formula::descr(x, a, b))
                .boxed(),
        ];
        if language == Language::Negation {
            options.push(inner.clone().prop_map(Formula::not).boxed());
        }
        prop::strategy::Union::new(options)
    })
}

fn signature(language: Language) -> Signature {
    let sig = Signature::new(language)
        .with_free(true)
        .with_descriptions(true)
        .with_predicate("P", 1)
        .with_predicate("R", 2)
        .with_constant("a")
        .with_constant("b");
    match language {
        Language::Negation => sig,
        Language::Falsum => sig.primed_extension(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_roundtrip_negation(f in formula(Language::Negation)) {
        let sig = signature(Language::Negation);
        let text = print(&f);
        let back = parse_formula(&text, &sig).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(print(&back), text);
        prop_assert!(sig.check(&f).is_ok());
    }

    #[test]
    fn print_parse_roundtrip_falsum(f in formula(Language::Falsum)) {
        let sig = signature(Language::Falsum);
        let text = print(&f);
        prop_assert_eq!(parse_formula(&text, &sig).unwrap(), f);
    }

    #[test]
    fn substitution_of_absent_variable_is_identity(f in formula(Language::Negation), t in term()) {
        for x in ["x", "y", "z"] {
            if !free_vars(&f).contains(x) {
                prop_assert_eq!(substitute(&f, x, &t).unwrap(), f.clone());
            }
        }
    }

    #[test]
    fn substitution_updates_free_variables(f in formula(Language::Negation), t in term()) {
        for x in ["x", "y", "z"] {
            let fv = free_vars(&f);
            if fv.contains(x) && is_free_for(&t, x, &f) {
                let g = substitute(&f, x, &t).unwrap();
                let mut expected = fv.clone();
                expected.remove(x);
                if let Term::Var(v) = &t {
                    expected.insert(v.clone());
                }
                prop_assert_eq!(free_vars(&g), expected);
            } else if !is_free_for(&t, x, &f) {
                prop_assert!(substitute(&f, x, &t).is_err());
            }
        }
    }
}
