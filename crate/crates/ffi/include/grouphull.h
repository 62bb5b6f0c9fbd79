#ifndef GROUPHULL_H
#define GROUPHULL_H

#include <stdbool.h>
#include <stddef.h>

typedef enum GhStatus {
  GH_STATUS_OK = 0,
  GH_STATUS_NULL_POINTER = 1,
  GH_STATUS_INVALID_ARGUMENT = 2,
  GH_STATUS_INTEGRITY = 3,
  GH_STATUS_INCOMPLETE = 4,
  GH_STATUS_IO = 5,
  GH_STATUS_INTERNAL = 6,
} GhStatus;

typedef struct GhDatabase GhDatabase;

typedef struct GhGroup GhGroup;

// Result of checking `Tr(X·A) <= rhs` over every group element `X`.
typedef struct GhVerifyResult {
  bool valid;
  bool is_facet;
  size_t incidence;
  size_t violations;
  size_t rank;
} GhVerifyResult;

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call on the same thread.
const char *gh_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void gh_string_free(char *s);

// Builds a Coxeter group by name, e.g. `"F4"`, `"H4"`, `"I2(5)"`.
//
// # Safety
// `name` must be a valid C string and `out` a valid pointer.
enum GhStatus gh_group_new(const char *name, struct GhGroup **out);

// # Safety
// `g` must come from [`gh_group_new`] and not be freed twice.
void gh_group_free(struct GhGroup *g);

// Number of elements, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live group handle.
size_t gh_group_order(const struct GhGroup *g);

// Matrix dimension, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live group handle.
size_t gh_group_dim(const struct GhGroup *g);

// Order of the symmetry group of the polytope as a decimal string.
//
// # Safety
// `g` must be a live group handle and `out` a valid pointer. Free the
// result with [`gh_string_free`].
enum GhStatus gh_group_symmetry_order(const struct GhGroup *g, char **out);

// Checks the inequality `Tr(X·A) <= rhs` for every element `X` of `g`.
// `matrix` holds one row per line in the scalar text syntax.
//
// # Safety
// `g` must be a live group handle, `matrix` and `rhs` valid C strings and
// `out` a valid pointer.
enum GhStatus gh_verify(const struct GhGroup *g,
                        const char *matrix,
                        const char *rhs,
                        struct GhVerifyResult *out);

// Enumerates facet orbits of the group's polytope by adjacency
// decomposition. `threads == 0` uses all cores; `max_orbits == 0` means no
// limit. Returns [`GhStatus::Incomplete`] with a valid database in `out`
// when the run stopped early.
//
// # Safety
// `g` must be a live group handle and `out` a valid pointer.
enum GhStatus gh_enumerate(const struct GhGroup *g,
                           size_t threads,
                           size_t max_orbits,
                           struct GhDatabase **out);

// Continues an enumeration in place. Arguments as for [`gh_enumerate`].
//
// # Safety
// `g` and `db` must be live handles.
enum GhStatus gh_enumerate_resume(const struct GhGroup *g,
                                  struct GhDatabase *db,
                                  size_t threads,
                                  size_t max_orbits);

// Loads a checkpoint file.
//
// # Safety
// `path` must be a valid C string and `out` a valid pointer.
enum GhStatus gh_database_load(const char *path, struct GhDatabase **out);

// Writes the database atomically.
//
// # Safety
// `db` must be a live handle and `path` a valid C string.
enum GhStatus gh_database_save(const struct GhDatabase *db, const char *path);

// # Safety
// `db` must come from this library and not be freed twice.
void gh_database_free(struct GhDatabase *db);

// Number of stored orbits, or 0 for a null handle.
//
// # Safety
// `db` must be null or a live handle.
size_t gh_database_orbit_count(const struct GhDatabase *db);

// Whether every stored orbit has been processed.
//
// # Safety
// `db` must be null or a live handle.
bool gh_database_is_complete(const struct GhDatabase *db);

// Incidence of the orbit at `index` in database order.
//
// # Safety
// `db` must be a live handle and `out` a valid pointer.
enum GhStatus gh_database_orbit_incidence(const struct GhDatabase *db, size_t index, size_t *out);

// Summary report as JSON: orbit count, total facets and histograms.
//
// # Safety
// `db` must be a live handle and `out` a valid pointer. Free the result
// with [`gh_string_free`].
enum GhStatus gh_database_report_json(const struct GhDatabase *db, char **out);

#endif  /* GROUPHULL_H */
