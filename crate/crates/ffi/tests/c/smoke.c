#include <stdio.h>
#include <string.h>
#include "grovemaze.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        GmStatus s_ = (call);                                              \
        if (s_ != GM_STATUS_OK) {                                          \
            fprintf(stderr, "%s -> %d: %s\n", #call, s_, gm_last_error()); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    GmMaze *maze = NULL;
    CHECK(gm_maze_parse("2 0 0 1 1\n61\nc1\n", &maze));

    int64_t f = 0;
    CHECK(gm_path_fitness(maze, 2, 9, 0, 0, &f));
    if (f != 4) return 2;

    GmSearchOptions opts = gm_search_options_default();
    opts.seed = 11;
    GmOutcome *out = NULL;
    CHECK(gm_solve(maze, 2, 0, 0, &opts, &out));
    uint64_t idx = 0;
    int64_t fit = 0;
    CHECK(gm_outcome_best(out, &idx, &fit));
    char *letters = NULL;
    CHECK(gm_path_letters(idx, 2, &letters));
    printf("%s %lld\n", letters, (long long)fit);
    gm_string_free(letters);

    if (gm_maze_generate(1, 0, &maze) != GM_STATUS_INVALID_ARGUMENT) return 3;
    if (strstr(gm_last_error(), "m must be") == NULL) return 4;

    gm_outcome_free(out);
    gm_maze_free(maze);
    return 0;
}
