#ifndef WQO_H
#define WQO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Outcome of a call.
 */
typedef enum {
  WQO_STATUS_OK = 0,
  WQO_STATUS_NULL_ARGUMENT = 1,
  WQO_STATUS_INVALID_UTF8 = 2,
  WQO_STATUS_PARSE = 3,
  WQO_STATUS_ALPHABET_MISMATCH = 4,
  WQO_STATUS_UNSUPPORTED = 5,
  WQO_STATUS_PRECONDITION = 6,
  WQO_STATUS_STATE_CAP = 7,
  WQO_STATUS_INCONCLUSIVE = 8,
  WQO_STATUS_CERTIFICATION = 9,
  WQO_STATUS_INVALID_INPUT = 10,
  WQO_STATUS_PANIC = 11,
} WqoStatus;

/*
 Verdict of [`wqo_separate`].
 */
typedef enum {
  WQO_VERDICT_SEPARABLE = 0,
  WQO_VERDICT_INSEPARABLE = 1,
  WQO_VERDICT_UNDECIDED = 2,
} WqoVerdict;

/*
 Opaque automaton handle.
 */
typedef struct WqoAutomaton WqoAutomaton;

/*
 Opaque order handle.
 */
typedef struct WqoOrder WqoOrder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failed call on this thread; empty after a success. Valid until the
 next call on the same thread.
 */
const char *wqo_last_error(void);

/*
 Releases a string returned by the library.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void wqo_string_free(char *s);

/*
 Builds an automaton from a regular expression. `alphabet` lists the symbols (e.g. `"ab"`); when
 null, the symbols of the expression are used.

 # Safety
 String arguments must be null or NUL-terminated; `out` must be writable.
 */
WqoStatus wqo_automaton_from_regex(const char *regex, const char *alphabet, WqoAutomaton **out);

/*
 Builds an automaton from its JSON or line-format description.

 # Safety
 `source` must be NUL-terminated; `out` must be writable.
 */
WqoStatus wqo_automaton_parse(const char *source, WqoAutomaton **out);

/*
 Releases an automaton.

 # Safety
 `a` must come from this library and not be freed twice.
 */
void wqo_automaton_free(WqoAutomaton *a);

/*
 Number of states.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
WqoStatus wqo_automaton_num_states(const WqoAutomaton *a, uintptr_t *out);

/*
 Membership of a word (a string of alphabet symbols; `""` is the empty word).

 # Safety
 `a` must be a live handle; `word` NUL-terminated; `out` writable.
 */
WqoStatus wqo_automaton_accepts(const WqoAutomaton *a, const char *word, bool *out);

/*
 Renders an automaton in the line format.

 # Safety
 `a` must be a live handle; `out` writable. Free the result with [`wqo_string_free`].
 */
WqoStatus wqo_automaton_to_text(const WqoAutomaton *a, char **out);

/*
 Parses an order (`subword`, `mod:2`, `conj(...)`, ...) over the given alphabet. File-based orders
 read their files from the given paths.

 # Safety
 Strings must be NUL-terminated; `out` writable.
 */
WqoStatus wqo_order_parse(const char *source, const char *alphabet, WqoOrder **out);

/*
 Releases an order.

 # Safety
 `o` must come from this library and not be freed twice.
 */
void wqo_order_free(WqoOrder *o);

/*
 Decides `u ⪯ v`.

 # Safety
 `o` must be a live handle; words NUL-terminated; `out` writable.
 */
WqoStatus wqo_order_leq(const WqoOrder *o, const char *u, const char *v, bool *out);

/*
 Downward closure of a language.

 # Safety
 Handles must be live; `out` writable.
 */
WqoStatus wqo_downward_closure(const WqoOrder *o, const WqoAutomaton *a, WqoAutomaton **out);

/*
 Upward closure of a language.

 # Safety
 Handles must be live; `out` writable.
 */
WqoStatus wqo_upward_closure(const WqoOrder *o, const WqoAutomaton *a, WqoAutomaton **out);

/*
 Whether the ideal written as a pattern literal lies in the adherence of the language.

 # Safety
 Handles must be live; `ideal` NUL-terminated; `out` writable.
 */
WqoStatus wqo_adherence_member(const WqoOrder *o,
                               const char *ideal,
                               const WqoAutomaton *a,
                               bool *out);

/*
 Separability of `k` from `l` by boolean combinations of upward closures. `detail` receives the
 separating formula or the inseparability certificate (empty when undecided); free it with
 [`wqo_string_free`].

 # Safety
 Handles must be live; out-pointers writable.
 */
WqoStatus wqo_separate(const WqoOrder *o,
                       const WqoAutomaton *k,
                       const WqoAutomaton *l,
                       uintptr_t budget,
                       WqoVerdict *verdict,
                       char **detail);

/*
 The modulus bound `2·(m³)!` in decimal.

 # Safety
 `out` must be writable; free the result with [`wqo_string_free`].
 */
WqoStatus wqo_mod_bound(uintptr_t m, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WQO_H */
