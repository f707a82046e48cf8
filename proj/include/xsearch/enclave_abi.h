// Copyright 2026 The X-Search Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * Boundary between the untrusted host and the trusted proxy component.
 *
 * ecalls (host -> trusted):
 *   xs_ecall_init     setup options for the proxy
 *   xs_ecall_request  provision of data read from a client socket
 *
 * ocalls (trusted -> host), passed as a table at creation:
 *   connect  DNS lookup and connection to a server, returns a socket
 *   send     send data through a socket
 *   recv     receive data from a socket
 *   close    close a socket
 *   quote    sign (measurement, report_data) with the platform key
 *
 * xs_enclave_create / xs_enclave_destroy play the role of the enclave id:
 * every ecall names the instance it enters.
 *
 * Return values are 0 (or a byte count) on success and negative on error.
 */

#ifndef XSEARCH_ENCLAVE_ABI_H_
#define XSEARCH_ENCLAVE_ABI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define XS_EVIDENCE_BYTES 160

#define XS_OK 0
#define XS_ERR_INVALID (-1)
#define XS_ERR_NETWORK (-2)
#define XS_ERR_INTERNAL (-3)

typedef int64_t xs_sock_t;

typedef struct xs_ocall_table {
  void* ctx;
  xs_sock_t (*connect)(void* ctx, const char* host, uint16_t port);
  int64_t (*send)(void* ctx, xs_sock_t sock, const uint8_t* buf, size_t len);
  int64_t (*recv)(void* ctx, xs_sock_t sock, uint8_t* buf, size_t len);
  int (*close)(void* ctx, xs_sock_t sock);
  int (*quote)(void* ctx, const uint8_t report_data[32],
               uint8_t evidence[XS_EVIDENCE_BYTES]);
} xs_ocall_table;

typedef struct xs_enclave xs_enclave;

typedef xs_enclave* (*xs_enclave_create_fn)(const xs_ocall_table* ocalls);
typedef void (*xs_enclave_destroy_fn)(xs_enclave* enclave);
typedef int (*xs_ecall_init_fn)(xs_enclave* enclave, const char* params,
                                size_t len);
typedef int (*xs_ecall_request_fn)(xs_enclave* enclave, xs_sock_t sock,
                                   const uint8_t* buf, size_t len);

xs_enclave* xs_enclave_create(const xs_ocall_table* ocalls);
void xs_enclave_destroy(xs_enclave* enclave);
int xs_ecall_init(xs_enclave* enclave, const char* params, size_t len);
/* len == 0 signals that the peer closed the socket. */
int xs_ecall_request(xs_enclave* enclave, xs_sock_t sock, const uint8_t* buf,
                     size_t len);

#ifdef __cplusplus
}
#endif

#endif  // XSEARCH_ENCLAVE_ABI_H_
