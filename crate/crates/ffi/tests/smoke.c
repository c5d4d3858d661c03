#include <stdio.h>
#include "munn.h"

int main(void) {
    MunnContextHandle *ctx = NULL;
    const char *context = "{\"domain\": {\"kind\": \"rationals\"}, \"m\": 3, \"n\": 3, \"r\": 2}";
    if (munn_context_new_json(context, &ctx) != MUNN_STATUS_OK) {
        printf("context: %s\n", munn_last_error_message());
        return 1;
    }
    char *witness = NULL;
    const char *element = "{\"entries\": [[\"1/2\", 0, 3], [0, -1, 0], [2, 0, \"7/3\"]]}";
    if (munn_decompose_json(ctx, element, "xi-blocks", 0, 0, &witness) != MUNN_STATUS_OK) {
        printf("decompose: %s\n", witness);
        return 1;
    }
    char *report = NULL;
    MunnStatus status = munn_verify_json(ctx, witness, &report);
    printf("%s\n", report);
    munn_string_free(witness);
    munn_string_free(report);
    munn_context_free(ctx);
    return status == MUNN_STATUS_OK ? 0 : 1;
}
