#include <stdio.h>
#include <string.h>
#include "kahyp.h"

#define CHECK(c) do { if (!(c)) { fprintf(stderr, "failed: %s\n", #c); return 1; } } while (0)

int main(void) {
    KahypExpr *e = NULL, *out = NULL;
    KahypHypotheses *h = NULL;
    KahypReduction *r = NULL;
    CHECK(kahyp_expr_parse("a", &e) == KAHYP_STATUS_OK);
    CHECK(kahyp_hypotheses_parse("ba<=a", &h) == KAHYP_STATUS_OK);
    KahypConfig cfg = kahyp_config_default();
    CHECK(kahyp_reduce(e, h, &cfg, &r) == KAHYP_STATUS_OK);
    CHECK(kahyp_reduction_is_reduced(r));
    out = kahyp_reduction_expr(r);
    char *s = kahyp_expr_to_string(out);
    printf("%s\n", s);
    kahyp_string_free(s);

    KahypExpr *bad = NULL;
    CHECK(kahyp_expr_parse("(a", &bad) == KAHYP_STATUS_SYNTAX);
    CHECK(kahyp_last_error() != NULL && strlen(kahyp_last_error()) > 0);

    kahyp_expr_free(out);
    kahyp_reduction_free(r);
    kahyp_hypotheses_free(h);
    kahyp_expr_free(e);
    return 0;
}
