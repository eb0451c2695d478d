use std::collections::HashSet;

use proptest::prelude::*;

use syncplay::automaton::{default_alphabet, Automaton, Dfa, Dwa, Letter, Pfa, Word};
use syncplay::constructions::{eppstein_qsat, pfa_to_dwa, BudgetInstance, CnfFormula, Literal};
use syncplay::format::{parse_automaton, serialize_automaton};
use syncplay::game::{
    cubic_move_bound, decide_winner, optimal_moves, short_game_decide,
    short_game_decide_lowmem_with, short_game_decide_with, Engine, GamePosition, MoveCounting,
    Player, StrategyMode,
};
use syncplay::oracle::qsat_alice_wins;
use syncplay::sync::{careful_shortest_word, is_synchronizing, shortest_reset_word};
use syncplay::weighted::{budget_decide, game_on_budget, min_sync_cost, sync_cost, word_cost};
use syncplay::StateSet;

fn dfa_strategy(max_n: usize, max_k: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        prop::collection::vec(0..n, n * k)
            .prop_map(move |t| Dfa::from_fn(n, k, |q, a| t[a * n + q]).unwrap())
    })
}

fn pfa_strategy(max_n: usize) -> impl Strategy<Value = Pfa> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.8, 0..n), 2 * n)
            .prop_map(move |t| Pfa::from_fn(n, 2, |q, a| t[a * n + q]).unwrap())
    })
}

fn dwa_strategy(max_n: usize, max_cost: u64) -> impl Strategy<Value = Dwa> {
    (1..=max_n)
        .prop_flat_map(|n| {
            prop::collection::vec(0..n, 2 * n)
                .prop_map(move |t| Dfa::from_fn(n, 2, |q, a| t[a * n + q]).unwrap())
        })
        .prop_flat_map(move |d| {
            let cells = d.n() * d.k();
            prop::collection::vec(1..=max_cost, cells).prop_map(move |c| {
                let rows = c.chunks(d.n()).map(<[u64]>::to_vec).collect();
                Dwa::new(d.clone(), rows).unwrap()
            })
        })
}

fn cnf_strategy() -> impl Strategy<Value = CnfFormula> {
    (1..=3usize).prop_flat_map(|vars| {
        // per variable: absent, positive or negative; an all-absent clause is dropped
        let clause = prop::collection::vec(0..3u8, vars).prop_map(|signs| {
            signs
                .iter()
                .enumerate()
                .filter(|&(_, &s)| s != 0)
                .map(|(v, &s)| {
                    if s == 1 {
                        Literal::pos(v)
                    } else {
                        Literal::neg(v)
                    }
                })
                .collect::<Vec<_>>()
        });
        prop::collection::vec(clause, 1..=4).prop_filter_map(
            "needs a non-empty clause",
            move |clauses| {
                let clauses: Vec<_> = clauses.into_iter().filter(|c| !c.is_empty()).collect();
                (!clauses.is_empty()).then(|| CnfFormula::new(vars, clauses).unwrap())
            },
        )
    })
}

fn word_strategy(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k, 0..=max_len).prop_map(Word::from_indices)
}

fn resets(dfa: &Dfa, w: &Word) -> bool {
    dfa.image(StateSet::full(dfa.n()), w)
        .unwrap()
        .is_singleton()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn documents_round_trip(d in dwa_strategy(6, 1 << 40), p in pfa_strategy(6)) {
        for a in [Automaton::Dfa(d.dfa().clone()), Automaton::Dwa(d), Automaton::Pfa(p)] {
            let text = serialize_automaton(&a);
            let back = parse_automaton(text.as_bytes()).unwrap();
            prop_assert_eq!(serialize_automaton(&back), text);
        }
    }

    #[test]
    fn shortest_reset_word_is_a_minimal_reset_word(d in dfa_strategy(5, 2)) {
        let res = shortest_reset_word(&d).unwrap();
        prop_assert_eq!(res.synchronizing(), is_synchronizing(&d));
        if let Some(w) = res.shortest_word {
            prop_assert!(resets(&d, &w));
            prop_assert!((w.len() as u64) <= ((d.n().pow(3) - d.n()) / 6) as u64);
            // no shorter word resets
            if !w.is_empty() && w.len() <= 9 {
                let shorter = w.len() - 1;
                let total = d.k().pow(shorter as u32);
                for code in 0..total {
                    let mut c = code;
                    let cand = Word::from_indices((0..shorter).map(|_| { let a = c % d.k(); c /= d.k(); a }));
                    prop_assert!(!resets(&d, &cand));
                }
            }
        }
    }

    #[test]
    fn careful_words_stay_defined(p in pfa_strategy(6)) {
        if let Some(w) = careful_shortest_word(&p).unwrap().shortest_word {
            let img = w.letters().iter().try_fold(StateSet::full(p.n()), |s, &Letter(a)| p.image_letter(s, a));
            prop_assert!(img.is_some_and(StateSet::is_singleton));
        }
    }

    #[test]
    fn careful_synchronization_matches_budget(p in pfa_strategy(6)) {
        let careful = careful_shortest_word(&p).unwrap().synchronizing();
        prop_assert_eq!(careful, budget_decide(&pfa_to_dwa(&p).unwrap()).unwrap().feasible);
    }

    #[test]
    fn word_cost_is_additive(d in dwa_strategy(6, 9), u in word_strategy(2, 6), v in word_strategy(2, 6)) {
        for q in 0..d.n() {
            let mid = d.dfa().apply_word(q, &u).unwrap();
            prop_assert_eq!(
                word_cost(&d, q, &u.concat(&v)).unwrap(),
                word_cost(&d, q, &u).unwrap() + word_cost(&d, mid, &v).unwrap()
            );
        }
    }

    #[test]
    fn sync_cost_dominates_length(d in dwa_strategy(5, 3), w in word_strategy(2, 10)) {
        if resets(d.dfa(), &w) {
            let c = sync_cost(&d, &w).unwrap();
            prop_assert!(c >= w.len() as u64);
            let all_unit = (0..d.n()).all(|q| {
                let mut p = q;
                w.letters().iter().all(|&Letter(a)| { let ok = d.cost(p, a) == 1; p = d.dfa().next(p, a); ok })
            });
            prop_assert_eq!(c == w.len() as u64, all_unit);
        }
    }

    #[test]
    fn budget_is_monotone_and_witnessed(d in dwa_strategy(5, 4), b in 1u64..16) {
        let r = budget_decide(&BudgetInstance::new(d.clone(), b).unwrap()).unwrap();
        if r.feasible {
            let w = r.witness.unwrap();
            prop_assert!(sync_cost(&d, &w).unwrap() <= b);
            prop_assert!(budget_decide(&BudgetInstance::new(d.clone(), b + 3).unwrap()).unwrap().feasible);
        }
        match min_sync_cost(&d).unwrap() {
            Some(m) => prop_assert_eq!(r.feasible, m <= b),
            None => prop_assert!(!r.feasible),
        }
    }

    #[test]
    fn unit_costs_measure_length(d in dfa_strategy(6, 2)) {
        let len = shortest_reset_word(&d).unwrap().min_length().map(|l| l as u64);
        prop_assert_eq!(min_sync_cost(&Dwa::unit(d)).unwrap(), len);
    }

    #[test]
    fn pair_game_decides_full_game(d in dfa_strategy(7, 3)) {
        let value = optimal_moves(&d).unwrap().start_value();
        prop_assert_eq!(decide_winner(&d).0 == Player::Alice, value.is_some());
        if let Some(v) = value {
            prop_assert!(u64::from(v) <= cubic_move_bound(d.n()));
        }
    }

    #[test]
    fn short_game_threshold_is_the_game_value(d in dfa_strategy(6, 2)) {
        let value = optimal_moves(&d).unwrap().start_value();
        let mut first = None;
        let mut prev = false;
        for l in 0..=12u64 {
            let now = short_game_decide(&d, l).unwrap();
            prop_assert!(!prev || now, "not monotone at {}", l);
            if now && first.is_none() {
                first = Some(l as u32);
            }
            prev = now;
        }
        if value.is_some_and(|v| v <= 12) || first.is_some() {
            prop_assert_eq!(first, value);
        }
    }

    #[test]
    fn half_move_counting_agrees_across_solvers(d in dfa_strategy(6, 3), l in 0u64..10) {
        prop_assert_eq!(
            short_game_decide_with(&d, l, MoveCounting::HalfMoves).unwrap(),
            short_game_decide_lowmem_with(&d, l, MoveCounting::HalfMoves).unwrap()
        );
    }

    #[test]
    fn engine_play_realizes_the_value(d in dfa_strategy(6, 3)) {
        for mode in [StrategyMode::Exact, StrategyMode::Pair] {
            let e = Engine::new(&d, mode).unwrap();
            let value = optimal_moves(&d).unwrap().start_value();
            let mut pos = GamePosition::start(d.n());
            let mut alice_moves = 0u32;
            let mut seen = HashSet::new();
            while !pos.is_terminal() && seen.insert(pos) {
                let a = match pos.mover {
                    Player::Alice => {
                        alice_moves += 1;
                        match e.alice_move(pos) {
                            Ok(a) => a,
                            Err(_) => { prop_assert!(value.is_none()); break; }
                        }
                    }
                    Player::Bob => e.bob_move(pos).unwrap(),
                };
                pos = GamePosition::new(d.image_letter(pos.coins, a.0), pos.mover.other());
            }
            match value {
                Some(v) => {
                    prop_assert!(pos.is_terminal());
                    if mode == StrategyMode::Exact {
                        prop_assert_eq!(alice_moves, v);
                    } else {
                        prop_assert!(u64::from(alice_moves) <= cubic_move_bound(d.n()));
                    }
                }
                None => prop_assert!(!pos.is_terminal()),
            }
        }
    }

    #[test]
    fn qsat_gadget_matches_brute_force(psi in cnf_strategy()) {
        let gadget = eppstein_qsat(&psi).unwrap();
        let vars = psi.num_vars() as u64;
        prop_assert_eq!(
            short_game_decide_with(&gadget, vars, MoveCounting::HalfMoves).unwrap(),
            qsat_alice_wins(&psi)
        );
    }

    #[test]
    fn budgeted_game_is_monotone(d in dwa_strategy(4, 3)) {
        let mut prev = false;
        for b in 0..=24 {
            let now = game_on_budget(&d, b).unwrap();
            prop_assert!(!prev || now);
            prev = now;
        }
    }

    #[test]
    fn unit_budget_game_tracks_winner(d in dfa_strategy(4, 2)) {
        let alice = decide_winner(&d).0 == Player::Alice;
        let b = 2 * cubic_move_bound(d.n());
        prop_assert_eq!(game_on_budget(&Dwa::unit(d), b).unwrap(), alice);
    }
}

#[test]
fn default_alphabet_names() {
    assert_eq!(default_alphabet(3), ["a", "b", "c"]);
}
