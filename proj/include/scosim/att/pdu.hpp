/******************************************************************************
 *
 *  Copyright 2026 The scosim Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at:
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scosim/att/attribute.hpp"
#include "scosim/bytes.hpp"

namespace scosim::att {

enum class Opcode : uint8_t {
  kErrorResponse = 0x01,
  kFindInformationRequest = 0x04,
  kFindInformationResponse = 0x05,
  kReadRequest = 0x0A,
  kReadResponse = 0x0B,
  kWriteRequest = 0x12,
  kWriteResponse = 0x13,
  kHandleValueNotification = 0x1B,
};

enum class ErrorCode : uint8_t {
  kInvalidHandle = 0x01,
  kInvalidPdu = 0x04,
  kInsufficientAuthentication = 0x05,
  kRequestNotSupported = 0x06,
  kAttributeNotFound = 0x0A,
};

std::string_view to_string(ErrorCode code);

struct Pdu {
  Opcode opcode = Opcode::kErrorResponse;
  Bytes payload;

  Bytes encode() const;
  static std::optional<Pdu> decode(BytesView wire);

  bool operator==(const Pdu&) const = default;
};

struct ErrorResponse {
  Opcode request = Opcode::kReadRequest;
  uint16_t handle = 0;
  ErrorCode code = ErrorCode::kInvalidHandle;
};

struct HandleValue {
  uint16_t handle = 0;
  Bytes value;
};

struct HandleUuid {
  uint16_t handle = 0;
  Uuid uuid;
};

Pdu make_error_response(const ErrorResponse& error);
Pdu make_find_information_request(uint16_t start, uint16_t end);
Pdu make_find_information_response(const std::vector<HandleUuid>& entries);
Pdu make_read_request(uint16_t handle);
Pdu make_read_response(BytesView value);
Pdu make_write_request(uint16_t handle, BytesView value);
Pdu make_write_response();
Pdu make_notification(uint16_t handle, BytesView value);

std::optional<ErrorResponse> parse_error_response(const Pdu& pdu);
std::optional<std::pair<uint16_t, uint16_t>> parse_find_information_request(
    const Pdu& pdu);
std::optional<std::vector<HandleUuid>> parse_find_information_response(
    const Pdu& pdu);
std::optional<uint16_t> parse_read_request(const Pdu& pdu);
// Write requests and notifications share the handle-then-value layout.
std::optional<HandleValue> parse_handle_value(const Pdu& pdu);

std::string describe(const Pdu& pdu);

}  // namespace scosim::att
