/* C interface to the kicked XXZ chain simulator.
 *
 * All state lives behind the opaque kxxz_config handle. Every fallible call
 * returns a kxxz_status; on failure kxxz_last_error() holds a message for
 * the calling thread until its next kxxz call.
 */
#ifndef KXXZ_H
#define KXXZ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kxxz_status {
  KXXZ_OK = 0,
  KXXZ_ERR = 1,         /* unexpected failure */
  KXXZ_ERR_CONFIG = 2,  /* invalid parameter, key, value, or file */
  KXXZ_ERR_NUMERIC = 3  /* a numerical routine failed its quality checks */
} kxxz_status;

typedef struct kxxz_config kxxz_config;

/* Fresh configuration holding the documented defaults; NULL on allocation
 * failure. Destroy with kxxz_config_destroy (NULL is a no-op). */
kxxz_config* kxxz_config_create(void);
void kxxz_config_destroy(kxxz_config* cfg);

/* Sets one key exactly as a "key = value" config line would. */
kxxz_status kxxz_config_set(kxxz_config* cfg, const char* key,
                            const char* value);

/* Layers a config file over the current contents. */
kxxz_status kxxz_config_load_file(kxxz_config* cfg, const char* path);

/* The echoed "# key = value" form of the configuration, heap-allocated;
 * release with kxxz_string_free. NULL on failure. */
char* kxxz_config_echo(const kxxz_config* cfg);
void kxxz_string_free(char* s);

/* Runs a scenario, writing its data files into the configured output directory.
 * A non-NULL scenario overrides the configured one. */
kxxz_status kxxz_run(kxxz_config* cfg, const char* scenario);

/* Message of the most recent failed call on this thread ("" if none). The
 * pointer stays valid until the thread's next kxxz call. */
const char* kxxz_last_error(void);

/* Dimension of the charge sector |m| = q, or 0 outside the valid range. */
uint64_t kxxz_dim_q(int L, int q);

/* Dimension of the (charge, wall count) class within the sector. */
uint64_t kxxz_dim_qp(int L, int q, int p);

/* Largest class dimension over the sector dimension; 0 on bad arguments. */
double kxxz_ratio_q_combinatorial(int L, int q);

/* Resolves "neel" / "domain_wall" / "all_up" / a [ud] bitstring to the bit
 * pattern of the basis state (site j is bit j - 1, up = 1). */
kxxz_status kxxz_named_state(const char* name, int L, uint64_t* bits);

const char* kxxz_version(void);

#ifdef __cplusplus
}
#endif

#endif /* KXXZ_H */
