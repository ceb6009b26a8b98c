/* C interface for the intransitive-systems workbench. */

#ifndef INTRANSITIVE_H
#define INTRANSITIVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Rotation direction selector; `Default` lets each fixture use its own
 * canonical direction.
 */
typedef enum {
  IM_ROTATION_DEFAULT = 0,
  IM_ROTATION_LEFT = 1,
  IM_ROTATION_RIGHT = 2,
} ImRotation;

/**
 * Result of every fallible call.
 */
typedef enum {
  /**
   * The expected intransitive structure was confirmed (or the search
   * found at least one result).
   */
  IM_STATUS_OK = 0,
  /**
   * The run completed but the structure was absent / the stream empty.
   */
  IM_STATUS_NEGATIVE = 1,
  /**
   * A precondition was violated (bad name, bad option, contract error).
   */
  IM_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The input was not a well-formed document.
   */
  IM_STATUS_PARSE_ERROR = 3,
  /**
   * A required pointer was null.
   */
  IM_STATUS_NULL_POINTER = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  IM_STATUS_INVALID_UTF8 = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  IM_STATUS_PANIC = 6,
} ImStatus;

/**
 * Opaque parsed document handle.
 */
typedef struct ImDocument ImDocument;

/**
 * Options shared by verify and demo calls. Zeroed fields mean "default".
 */
typedef struct {
  /**
   * Copies per side in value-multiset duels (0 is treated as 1).
   */
  uint32_t copies;
  /**
   * Longest cycle to search for (0 = up to the number of players).
   */
  uintptr_t max_cycle_len;
  ImRotation rotation;
  /**
   * Ring size for the chain demo (0 is treated as 4).
   */
  uintptr_t chain_n;
  /**
   * Append clearly marked decimal approximations to non-integer values.
   */
  bool decimal;
} ImOptions;

/**
 * Bounded design space for the dice search.
 */
typedef struct {
  uintptr_t sets;
  uintptr_t faces;
  int64_t value_min;
  int64_t value_max;
  /**
   * Copies per side (0 is treated as 1).
   */
  uint32_t copies;
  /**
   * Required cycle length (0 = sets).
   */
  uintptr_t cycle_len;
  /**
   * Weakest-step margin constraint num/den; den 0 means unconstrained.
   */
  int64_t min_margin_num;
  int64_t min_margin_den;
} ImDiceSearchSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if the last
 * call succeeded. Valid until the next failing call on the same thread; do
 * not free.
 */
const char *im_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void im_string_free(char *s);

/**
 * Parses one JSON document (dice_set, preference_profile, gear_assembly,
 * or lane_profile_set). Returns null on failure; see [`im_last_error`].
 *
 * # Safety
 * `json` must be a valid NUL-terminated string.
 */
ImDocument *im_document_parse(const char *json);

/**
 * Static document kind name: "dice_set", "preference_profile",
 * "gear_assembly", or "lane_profile_set". Null for a null document. Do not
 * free.
 *
 * # Safety
 * `doc` must be a live handle from [`im_document_parse`] or null.
 */
const char *im_document_kind(const ImDocument *doc);

/**
 * Releases a document handle. Null is ignored.
 *
 * # Safety
 * `doc` must have come from [`im_document_parse`] and not be freed twice.
 */
void im_document_free(ImDocument *doc);

/**
 * Options prefilled with the defaults.
 */
ImOptions im_options_default(void);

/**
 * Verifies a parsed document. `Ok` iff the expected intransitive structure
 * is present (for assemblies, iff the declared expectation is met);
 * `Negative` when the run completes without it. When `report_json_out` is
 * non-null it receives the full JSON report (caller frees).
 *
 * # Safety
 * `doc` must be a live handle; `options` may be null for defaults;
 * `report_json_out` may be null.
 */
ImStatus im_verify(const ImDocument *doc, const ImOptions *options, char **report_json_out);

/**
 * Runs a canonical demo by name (efron, losho-sticks, condorcet-vote,
 * gears3, gears-chain-n, levers, pulleys, towers, combs, birds).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `options` and
 * `report_json_out` may be null.
 */
ImStatus im_demo(const char *name, const ImOptions *options, char **report_json_out);

/**
 * Exhaustive dice search. `jsonl_out` receives the full stream (one
 * self-contained document per line, caller frees); `report_json_out`, when
 * non-null, receives the summary report. `limit` 0 means unlimited; the
 * stream is identical for every `jobs` value.
 *
 * # Safety
 * `spec` and `jsonl_out` must not be null; `report_json_out` may be null.
 */
ImStatus im_search_dice(const ImDiceSearchSpec *spec,
                        uintptr_t jobs,
                        uint64_t limit,
                        char **jsonl_out,
                        char **report_json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INTRANSITIVE_H */
