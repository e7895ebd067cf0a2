/* C interface to the wiretap toolkit. Regenerated by the crate's build script. */

#ifndef WIRETAP_TOOLKIT_H
#define WIRETAP_TOOLKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this interface.
typedef enum WtStatus {
  // The call succeeded and its `out` pointers were written.
  WT_STATUS_OK = 0,
  // A required pointer argument was null.
  WT_STATUS_NULL_ARGUMENT = 1,
  // An argument was rejected before any computation ran.
  WT_STATUS_INVALID_ARGUMENT = 2,
  // Reading or parsing a channel file failed.
  WT_STATUS_IO = 3,
  // A string argument was not valid UTF-8.
  WT_STATUS_UTF8 = 4,
  // The computation itself failed; see `wt_last_error_message`.
  WT_STATUS_COMPUTE_FAILURE = 5,
} WtStatus;

// Opaque handle to a computed rate bound.
typedef struct WtBoundReport WtBoundReport;

// Opaque handle to a loaded wiretap channel.
typedef struct WtChannel WtChannel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the toolkit as a static NUL-terminated string.
const char *wt_version(void);

// Message describing the most recent failure on the calling thread, or an
// empty string if none occurred. The pointer is invalidated by the next
// failing call on the same thread.
const char *wt_last_error_message(void);

// Loads a channel description from a `.wtc.json` file.
//
// On success, `*out` owns the channel and must be released with
// [`wt_channel_free`].
//
// # Safety
// `path` must point to a NUL-terminated string and `out` to writable
// storage for one pointer.
enum WtStatus wt_channel_load(const char *path, struct WtChannel **out);

// Releases a channel handle. Accepts null.
//
// # Safety
// `ch` must be null or a pointer obtained from [`wt_channel_load`] that has
// not been freed yet.
void wt_channel_free(struct WtChannel *ch);

// Number of classical input symbols of the channel.
//
// # Safety
// `ch` must be a live channel handle and `out` writable.
enum WtStatus wt_channel_num_symbols(const struct WtChannel *ch, size_t *out);

// Dimension of the legitimate receiver's output system.
//
// # Safety
// `ch` must be a live channel handle and `out` writable.
enum WtStatus wt_channel_bob_dim(const struct WtChannel *ch, size_t *out);

// Dimension of the eavesdropper's output system.
//
// # Safety
// `ch` must be a live channel handle and `out` writable.
enum WtStatus wt_channel_eve_dim(const struct WtChannel *ch, size_t *out);

// One-shot lower bound on public (non-private) communication at average
// error `eps1` with test slack `eta1` in `(0, eps1)`.
//
// On success, `*out` owns the report and must be released with
// [`wt_report_free`].
//
// # Safety
// `ch` must be a live channel handle, `p_x` null or a readable array of
// `p_x_len` doubles, and `out` writable.
enum WtStatus wt_bound_public(const struct WtChannel *ch,
                              const double *p_x,
                              size_t p_x_len,
                              double eps1,
                              double eta1,
                              struct WtBoundReport **out);

// One-shot lower bound on private communication at decoding error `eps1`
// (slack `eta1`) and secrecy parameter `eps2` (slack `eta2`).
//
// On success, `*out` owns the report and must be released with
// [`wt_report_free`].
//
// # Safety
// `ch` must be a live channel handle, `p_x` null or a readable array of
// `p_x_len` doubles, and `out` writable.
enum WtStatus wt_bound_private(const struct WtChannel *ch,
                               const double *p_x,
                               size_t p_x_len,
                               double eps1,
                               double eps2,
                               double eta1,
                               double eta2,
                               struct WtBoundReport **out);

// Second-order (normal-approximation) private rate per channel use at block
// length `n`.
//
// On success, `*out` owns the report and must be released with
// [`wt_report_free`].
//
// # Safety
// `ch` must be a live channel handle, `p_x` null or a readable array of
// `p_x_len` doubles, and `out` writable.
enum WtStatus wt_bound_second_order(const struct WtChannel *ch,
                                    const double *p_x,
                                    size_t p_x_len,
                                    uint64_t n,
                                    double eps1,
                                    double eps2,
                                    struct WtBoundReport **out);

// Rate of a computed bound, in bits.
//
// # Safety
// `report` must be a live report handle and `out` writable.
enum WtStatus wt_report_rate_bits(const struct WtBoundReport *report, double *out);

// Whether the bound's preconditions held, so the rate is actually certified.
//
// # Safety
// `report` must be a live report handle and `out` writable.
enum WtStatus wt_report_is_valid(const struct WtBoundReport *report, bool *out);

// Serializes the full report (rate, per-term breakdown, parameters) as a
// JSON string with 17-significant-digit floats.
//
// On success, `*out` owns the string and must be released with
// [`wt_string_free`].
//
// # Safety
// `report` must be a live report handle and `out` writable.
enum WtStatus wt_report_to_json(const struct WtBoundReport *report, char **out);

// Releases a report handle. Accepts null.
//
// # Safety
// `report` must be null or a pointer obtained from one of the `wt_bound_*`
// functions that has not been freed yet.
void wt_report_free(struct WtBoundReport *report);

// Releases a string returned by [`wt_report_to_json`]. Accepts null.
//
// # Safety
// `s` must be null or a pointer obtained from [`wt_report_to_json`] that has
// not been freed yet.
void wt_string_free(char *s);

// Asymptotic per-use private rate of the binary-phase coherent-state scheme
// on a pure-loss channel with transmissivity `eta` and mean photon number
// `nbar`.
//
// # Safety
// `out` must be writable.
enum WtStatus wt_bpsk_asymptote(double eta, double nbar, double *out);

// Energy-constrained private capacity of the pure-loss channel itself, the
// ceiling no modulation can beat.
//
// # Safety
// `out` must be writable.
enum WtStatus wt_bpsk_capacity(double eta, double nbar, double *out);

// Normal approximation of the binary-phase scheme's per-use private rate at
// block length `n` with error budgets `eps1` (decoding) and `eps2`
// (secrecy).
//
// # Safety
// `out` must be writable.
enum WtStatus wt_bpsk_normal_approx(double eta,
                                    double nbar,
                                    uint64_t n,
                                    double eps1,
                                    double eps2,
                                    double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WIRETAP_TOOLKIT_H */
