#include "magicsq/magicsq.h"
const char* magicsq_capi_header_smoke(void) { return magicsq_version(); }
