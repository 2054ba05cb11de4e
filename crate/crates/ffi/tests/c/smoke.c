#include <stdio.h>
#include <string.h>

#include "surface_semigroups.h"

static int check(int cond, const char *what) {
  if (!cond) {
    fprintf(stderr, "FAILED: %s\n", what);
  }
  return cond ? 0 : 1;
}

int main(void) {
  int failures = 0;
  SsDescriptor *d = NULL;
  SsReport *r = NULL;
  SsVerdict v;

  failures += check(ss_descriptor_parse("{\"surface\": {\"kind\": \"bielliptic\", \"type\": 3}}", &d) == SS_STATUS_OK,
                    "parse bielliptic");
  failures += check(ss_classify(d, &r) == SS_STATUS_OK, "classify");
  failures += check(ss_report_verdict(r, &v) == SS_STATUS_OK && v == SS_VERDICT_YES, "type 3 is YES");

  char *json = NULL;
  failures += check(ss_report_to_json(r, &json) == SS_STATUS_OK, "report json");
  failures += check(strstr(json, "\"verdict\": \"YES\"") != NULL, "json carries verdict");
  ss_string_free(json);
  ss_report_free(r);
  ss_descriptor_free(d);

  d = NULL;
  failures += check(ss_descriptor_parse("{\"surface\": {\"kind\": \"k3\"}}", &d) == SS_STATUS_SCHEMA_ERROR,
                    "missing field is a schema error");
  failures += check(d == NULL, "no handle on failure");
  failures += check(ss_last_error_message() != NULL, "error message set");

  int64_t n = 0;
  failures += check(ss_ruled_intersect(0, 1, 1, 0, 1, 0, &n) == SS_STATUS_OK && n == -1, "C0^2 = -e");
  failures += check(ss_ext1_dim(-2, -2) == 3, "ext1(O(2), O(-2))");

  int64_t num = 0, den = 0;
  uint32_t ms[] = {2, 3};
  failures += check(ss_delta_invariant(0, 1, ms, 2, &num, &den) == SS_STATUS_OK && num == 1 && den == 6,
                    "delta = 1/6");

  if (failures == 0) {
    printf("ok\n");
  }
  return failures == 0 ? 0 : 1;
}
