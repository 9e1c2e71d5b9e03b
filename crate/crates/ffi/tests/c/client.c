#include <stdio.h>
#include <string.h>

#include "sparsereal.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    sr_system *sys = NULL;
    CHECK(sr_system_from_json("{\"n\": 2, \"equations\": [\"3 + 2*x1^5 - 7*x2^3\"]}", &sys) == SR_STATUS_OK);
    char *bound = NULL;
    CHECK(sr_system_volume_bound(sys, &bound) == SR_STATUS_OK);
    CHECK(strcmp(bound, "30") == 0);
    sr_string_free(bound);
    sr_system_free(sys);

    int64_t a[4] = {2, 0, 0, 3};
    int64_t d[2] = {0, 0};
    CHECK(sr_smith_diagonal(a, 2, d) == SR_STATUS_OK);
    CHECK(d[0] == 1 && d[1] == 6);

    sr_ksum *f = NULL;
    CHECK(sr_ksum_parse("x^1000 - 2", &f) == SR_STATUS_OK);
    CHECK(sr_ksum_sign_alternations(f) == 1);
    char *root = NULL;
    CHECK(sr_ksum_solve(f, "2", "1e-12", 0, &root) == SR_STATUS_OK);
    CHECK(strstr(root, "1.000693387") != NULL);
    sr_string_free(root);
    sr_ksum_free(f);

    CHECK(sr_ksum_parse("x^^2", &f) == SR_STATUS_PARSE_ERROR);
    CHECK(sr_last_error_message() != NULL);
    printf("ok %s\n", sr_version());
    return 0;
}
