/* C interface to the operator-algebra workbench. All values travel as JSON
 * instances (see README for the formats) held behind opaque handles; every
 * function returns a status code and never throws across the boundary. */

#ifndef OPALG_H
#define OPALG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct opalg_obj opalg_obj; /* opaque instance handle */

typedef enum opalg_status {
    OPALG_OK = 0,           /* success / positive verdict */
    OPALG_NEGATIVE = 1,     /* verified negative verdict (not an error) */
    OPALG_ERR_INPUT = 2,    /* malformed input; see opalg_last_error */
    OPALG_ERR_INTERNAL = 3, /* theory-contradiction trap; always a bug */
    OPALG_ERR_NULL = 4      /* null argument */
} opalg_status;

const char* opalg_version(void);

/* Thread-local message describing the most recent failure. */
const char* opalg_last_error(void);

opalg_status opalg_parse(const char* json, opalg_obj** out);
opalg_status opalg_to_json(const opalg_obj* h, char** json_out);
const char* opalg_kind(const opalg_obj* h);
void opalg_obj_free(opalg_obj* h);
void opalg_string_free(char* s);

/* lattice / algebra wrappers */
opalg_status opalg_alg_of_lattice(const opalg_obj* csl, opalg_obj** out);
opalg_status opalg_lat_of_algebra(const opalg_obj* algebra, const opalg_obj* frame_csl,
                                  opalg_obj** out);
opalg_status opalg_commutant(const opalg_obj* space, opalg_obj** out);
opalg_status opalg_bicommutant(const opalg_obj* space, opalg_obj** out);
opalg_status opalg_diagonal(const opalg_obj* algebra, opalg_obj** out);

/* TRO calculus. tro_check accepts a space (ternary axiom + essentiality) or a
 * witness bundle (full re-verification); NEGATIVE when a check fails. */
opalg_status opalg_tro_check(const opalg_obj* space_or_witness, opalg_obj** report_out);
opalg_status opalg_tro_essentialize(const opalg_obj* space, opalg_obj** out);
opalg_status opalg_tro_compose(const opalg_obj* witness_b_a, const opalg_obj* witness_b_c,
                               opalg_obj** out);
opalg_status opalg_tro_theta(const opalg_obj* space, opalg_obj** star_iso_out);
opalg_status opalg_tro_enlarge(const opalg_obj* witness, opalg_obj** out);

/* deciders; OK = equivalent with a bundle, NEGATIVE = certificate */
opalg_status opalg_equiv_tro(const opalg_obj* csl1, const opalg_obj* csl2, opalg_obj** out);
opalg_status opalg_equiv_morita(const opalg_obj* csl1, const opalg_obj* csl2, opalg_obj** out);

/* lattice-isomorphism extension report (C*-span and atomic constructions) */
opalg_status opalg_extend_iso(const opalg_obj* iso, opalg_obj** report_out);

/* reflexive-hull membership of an operator (matrix instance) in a space;
 * NEGATIVE carries an exact witness vector in the verdict */
opalg_status opalg_ref_membership(const opalg_obj* space, const opalg_obj* matrix,
                                  uint64_t seed, int samples, opalg_obj** verdict_out);

opalg_status opalg_corpus_gen(int dim_lo, int dim_hi, int count, uint64_t seed,
                              opalg_obj** corpus_out);

/* full acceptance suite; NEGATIVE when some criterion fails */
opalg_status opalg_selftest(uint64_t seed, int quick, int parallel, opalg_obj** report_out);

#ifdef __cplusplus
}
#endif

#endif /* OPALG_H */
