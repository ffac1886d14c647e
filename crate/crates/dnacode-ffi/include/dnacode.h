/* C interface to the dnacode constrained-code library. */

#ifndef DNACODE_H
#define DNACODE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status returned by every fallible entry point.
typedef enum DcStatus {
  DC_OK = 0,
  // a parameter is out of range or inconsistent
  DC_INVALID_PARAMS = 1,
  // a sequence contains a symbol outside the alphabet
  DC_BAD_SYMBOL = 2,
  // a word is not a member of the constrained family
  DC_NOT_MEMBER = 3,
  // a word is not in the code
  DC_NOT_CODEWORD = 4,
  // correction failed or was ambiguous
  DC_DECODE_FAILURE = 5,
  // an enumeration would exceed the configured cap
  DC_CAP_EXCEEDED = 6,
  // a required pointer argument was null
  DC_NULL_ARGUMENT = 7,
  // an internal panic was caught at the boundary
  DC_PANIC = 8,
} DcStatus;

// Structure-avoiding run-length-limited code (no error correction).
typedef struct DcC1 DcC1;

// Concatenated substitution-correcting code.
typedef struct DcC2 DcC2;

// Single-edit-correcting subcode: a C2 code restricted to its fullest VT
// class, messages addressed by subcode index.
typedef struct DcC3 DcC3;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. Never null; empty
// before any failure. Do not free.
const char *dc_last_error_message(void);

// Frees a string returned through a `char **` out-param. Null is a no-op.
void dc_string_free(char *s);

// Creates a structure-avoiding RLL encoder. `word_length_out` may be null.
enum DcStatus dc_c1_new(size_t m,
                        size_t ell,
                        size_t n,
                        size_t t,
                        size_t *word_length_out,
                        struct DcC1 **handle_out);

void dc_c1_free(struct DcC1 *handle);

// Payload shape: `x_bits_out` bits address the first stream, `y_bits_out`
// bits ride the second stream verbatim.
enum DcStatus dc_c1_payload_bits(const struct DcC1 *handle, size_t *x_bits_out, size_t *y_bits_out);

// Encodes a message into a DNA word. `x_index` is a decimal integer,
// `y_bits` a string over {'0','1'} of exactly the advertised length.
enum DcStatus dc_c1_encode(const struct DcC1 *handle,
                           const char *x_index,
                           const char *y_bits,
                           char **dna_out);

// Decodes a DNA word back into its message parts.
enum DcStatus dc_c1_decode(const struct DcC1 *handle,
                           const char *dna,
                           char **x_index_out,
                           char **y_bits_out);

// Creates a substitution-correcting code. Balance tolerance is the fraction
// `eps_num / eps_den`. `k_out` and `word_length_out` may be null.
enum DcStatus dc_c2_new(size_t ell,
                        uint64_t eps_num,
                        uint64_t eps_den,
                        size_t n,
                        uint64_t q,
                        size_t r,
                        size_t *k_out,
                        size_t *word_length_out,
                        struct DcC2 **handle_out);

void dc_c2_free(struct DcC2 *handle);

// Encodes `k` field symbols (each below q) into a DNA word.
enum DcStatus dc_c2_encode(const struct DcC2 *handle,
                           const uint64_t *message,
                           size_t message_len,
                           char **dna_out);

// Decodes a DNA word, correcting up to one substitution. `message_out`
// must hold `k` symbols.
enum DcStatus dc_c2_decode(const struct DcC2 *handle,
                           const char *dna,
                           uint64_t *message_out,
                           size_t message_len);

// Builds the single-edit-correcting subcode of a substitution-correcting
// code: enumerates at most `cap` codewords and keeps the fullest VT class.
// The outputs may be null.
enum DcStatus dc_c3_new(size_t ell,
                        uint64_t eps_num,
                        uint64_t eps_den,
                        size_t n,
                        uint64_t q,
                        size_t r,
                        uint64_t cap,
                        size_t *subcode_size_out,
                        size_t *word_length_out,
                        struct DcC3 **handle_out);

void dc_c3_free(struct DcC3 *handle);

// VT class residues of the subcode.
enum DcStatus dc_c3_class(const struct DcC3 *handle, uint64_t *a_out, uint8_t *b_out);

// Encodes a subcode index into a DNA word.
enum DcStatus dc_c3_encode(const struct DcC3 *handle, uint64_t index, char **dna_out);

// Decodes a received word whose length may be off by one, correcting a
// single edit, and returns the subcode index it encodes.
enum DcStatus dc_c3_decode(const struct DcC3 *handle, const char *dna, uint64_t *index_out);

// Exact member count of the zero-dominant / RLL family intersection, as a
// decimal string. Either window may be zero to disable that constraint.
enum DcStatus dc_count_constrained(size_t dominance_window,
                                   size_t run_limit,
                                   size_t n,
                                   char **count_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNACODE_H */
