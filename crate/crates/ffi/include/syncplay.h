#ifndef SYNCPLAY_H
#define SYNCPLAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Stands for "no such value": no reset word, or Bob wins.
 */
#define SYNC_INFINITE UINT64_MAX

typedef enum SyncStatus {
  SYNC_STATUS_OK = 0,
  SYNC_STATUS_NULL_POINTER = 1,
  SYNC_STATUS_INVALID_UTF8 = 2,
  SYNC_STATUS_PARSE = 3,
  SYNC_STATUS_INPUT_DOMAIN = 4,
  SYNC_STATUS_CAPACITY = 5,
  SYNC_STATUS_STRATEGY = 6,
  SYNC_STATUS_CONTRACT = 7,
  SYNC_STATUS_CANCELLED = 8,
  SYNC_STATUS_PANIC = 9,
} SyncStatus;

typedef enum SyncKind {
  SYNC_KIND_DFA = 0,
  SYNC_KIND_PFA = 1,
  SYNC_KIND_DWA = 2,
} SyncKind;

typedef enum SyncPlayer {
  SYNC_PLAYER_ALICE = 0,
  SYNC_PLAYER_BOB = 1,
} SyncPlayer;

/**
 * An automaton of any kind.
 */
typedef struct SyncAutomaton SyncAutomaton;

/**
 * Precomputed strategy tables for one automaton.
 */
typedef struct SyncEngine SyncEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call on the same thread.
 */
const char *sync_last_error(void);

/**
 * Parse a NUL-terminated interchange document.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum SyncStatus sync_automaton_parse(const char *json, struct SyncAutomaton **out_automaton);

/**
 * # Safety
 * `a` must come from this library and not be used afterwards; null is
 * ignored.
 */
void sync_automaton_free(struct SyncAutomaton *a);

/**
 * Canonical interchange text; release with [`sync_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_automaton_serialize(const struct SyncAutomaton *a, char **out_json);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_automaton_info(const struct SyncAutomaton *a,
                                    enum SyncKind *out_kind,
                                    size_t *out_states,
                                    size_t *out_letters);

/**
 * # Safety
 * `s` must come from this library; null is ignored.
 */
void sync_string_free(char *s);

/**
 * # Safety
 * `out_automaton` must be valid.
 */
enum SyncStatus sync_cerny(size_t n, struct SyncAutomaton **out_automaton);

/**
 * Duplication of `a` with respect to letter index `letter` and state
 * `state`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_duplication(const struct SyncAutomaton *a,
                                 size_t letter,
                                 size_t state,
                                 bool pad_odd,
                                 struct SyncAutomaton **out_automaton);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_is_synchronizing(const struct SyncAutomaton *a, bool *out_result);

/**
 * Length of a shortest reset word, or [`SYNC_INFINITE`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_shortest_reset_length(const struct SyncAutomaton *a, uint64_t *out_length);

/**
 * A shortest reset word as text, or null when there is none. Release
 * with [`sync_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_shortest_reset_word(const struct SyncAutomaton *a, char **out_word);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_decide_winner(const struct SyncAutomaton *a, enum SyncPlayer *out_winner);

/**
 * Alice moves needed from the start, or [`SYNC_INFINITE`] if Bob wins.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_optimal_moves(const struct SyncAutomaton *a, uint64_t *out_moves);

/**
 * Does Alice win within `moves`? With `count_half_moves` every letter
 * counts, otherwise only Alice's.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_short_game_decide(const struct SyncAutomaton *a,
                                       uint64_t moves,
                                       bool count_half_moves,
                                       bool *out_result);

/**
 * Is there a reset word of cost at most `budget`? `out_cost` receives the
 * least cost when it fits, [`SYNC_INFINITE`] otherwise; it may be null.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_budget_decide(const struct SyncAutomaton *a,
                                   uint64_t budget,
                                   bool *out_feasible,
                                   uint64_t *out_cost);

/**
 * Least cost of a reset word, or [`SYNC_INFINITE`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_min_sync_cost(const struct SyncAutomaton *a, uint64_t *out_cost);

/**
 * Cost of the reset word `word` (letters juxtaposed or space separated).
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_sync_cost(const struct SyncAutomaton *a, const char *word, uint64_t *out_cost);

/**
 * Build strategy tables. `exact` selects optimal play from the full game
 * (limited state count); otherwise play works on pairs of coins.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_engine_new(const struct SyncAutomaton *a,
                                bool exact,
                                struct SyncEngine **out_engine);

/**
 * # Safety
 * `e` must come from this library and not be used afterwards; null is
 * ignored.
 */
void sync_engine_free(struct SyncEngine *e);

/**
 * Alice's move from the coin set `coins`. Fails with
 * [`SyncStatus::Strategy`] when Bob wins from there.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_engine_alice_move(const struct SyncEngine *e,
                                       uint64_t coins,
                                       size_t *out_letter);

/**
 * Bob's reply from the coin set `coins`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SyncStatus sync_engine_bob_move(const struct SyncEngine *e,
                                     uint64_t coins,
                                     size_t *out_letter);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYNCPLAY_H */
