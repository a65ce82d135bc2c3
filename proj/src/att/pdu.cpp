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

#include "scosim/att/pdu.hpp"

#include <sstream>

namespace scosim::att {

namespace {

void put16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

uint16_t get16(const Bytes& in, size_t at) {
  return static_cast<uint16_t>(in[at] | in[at + 1] << 8);
}

bool known_opcode(uint8_t op) {
  switch (static_cast<Opcode>(op)) {
    case Opcode::kErrorResponse:
    case Opcode::kFindInformationRequest:
    case Opcode::kFindInformationResponse:
    case Opcode::kReadRequest:
    case Opcode::kReadResponse:
    case Opcode::kWriteRequest:
    case Opcode::kWriteResponse:
    case Opcode::kHandleValueNotification:
      return true;
  }
  return false;
}

std::string_view opcode_name(Opcode op) {
  switch (op) {
    case Opcode::kErrorResponse:
      return "ErrorRsp";
    case Opcode::kFindInformationRequest:
      return "FindInfoReq";
    case Opcode::kFindInformationResponse:
      return "FindInfoRsp";
    case Opcode::kReadRequest:
      return "ReadReq";
    case Opcode::kReadResponse:
      return "ReadRsp";
    case Opcode::kWriteRequest:
      return "WriteReq";
    case Opcode::kWriteResponse:
      return "WriteRsp";
    case Opcode::kHandleValueNotification:
      return "Notify";
  }
  return "?";
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidHandle:
      return "InvalidHandle";
    case ErrorCode::kInvalidPdu:
      return "InvalidPdu";
    case ErrorCode::kInsufficientAuthentication:
      return "InsufficientAuthentication";
    case ErrorCode::kRequestNotSupported:
      return "RequestNotSupported";
    case ErrorCode::kAttributeNotFound:
      return "AttributeNotFound";
  }
  return "?";
}

Bytes Pdu::encode() const {
  Bytes out(payload.size() + 1);
  out[0] = static_cast<uint8_t>(opcode);
  std::copy(payload.begin(), payload.end(), out.begin() + 1);
  return out;
}

std::optional<Pdu> Pdu::decode(BytesView wire) {
  if (wire.empty() || !known_opcode(wire[0])) return std::nullopt;
  return Pdu{static_cast<Opcode>(wire[0]), Bytes(wire.begin() + 1, wire.end())};
}

Pdu make_error_response(const ErrorResponse& error) {
  Bytes p;
  p.push_back(static_cast<uint8_t>(error.request));
  put16(p, error.handle);
  p.push_back(static_cast<uint8_t>(error.code));
  return {Opcode::kErrorResponse, p};
}

Pdu make_find_information_request(uint16_t start, uint16_t end) {
  Bytes p;
  put16(p, start);
  put16(p, end);
  return {Opcode::kFindInformationRequest, p};
}

Pdu make_find_information_response(const std::vector<HandleUuid>& entries) {
  // Format 0x02: 128-bit UUIDs, sent little endian on the wire.
  Bytes p = {0x02};
  for (const auto& e : entries) {
    put16(p, e.handle);
    p.insert(p.end(), e.uuid.bytes.rbegin(), e.uuid.bytes.rend());
  }
  return {Opcode::kFindInformationResponse, p};
}

Pdu make_read_request(uint16_t handle) {
  Bytes p;
  put16(p, handle);
  return {Opcode::kReadRequest, p};
}

Pdu make_read_response(BytesView value) {
  return {Opcode::kReadResponse, Bytes(value.begin(), value.end())};
}

Pdu make_write_request(uint16_t handle, BytesView value) {
  Bytes p;
  put16(p, handle);
  append(p, value);
  return {Opcode::kWriteRequest, p};
}

Pdu make_write_response() { return {Opcode::kWriteResponse, {}}; }

Pdu make_notification(uint16_t handle, BytesView value) {
  Bytes p;
  put16(p, handle);
  append(p, value);
  return {Opcode::kHandleValueNotification, p};
}

std::optional<ErrorResponse> parse_error_response(const Pdu& pdu) {
  if (pdu.opcode != Opcode::kErrorResponse || pdu.payload.size() != 4) {
    return std::nullopt;
  }
  return ErrorResponse{static_cast<Opcode>(pdu.payload[0]),
                       get16(pdu.payload, 1),
                       static_cast<ErrorCode>(pdu.payload[3])};
}

std::optional<std::pair<uint16_t, uint16_t>> parse_find_information_request(
    const Pdu& pdu) {
  if (pdu.opcode != Opcode::kFindInformationRequest ||
      pdu.payload.size() != 4) {
    return std::nullopt;
  }
  return std::make_pair(get16(pdu.payload, 0), get16(pdu.payload, 2));
}

std::optional<std::vector<HandleUuid>> parse_find_information_response(
    const Pdu& pdu) {
  if (pdu.opcode != Opcode::kFindInformationResponse || pdu.payload.empty() ||
      pdu.payload[0] != 0x02 || (pdu.payload.size() - 1) % 18 != 0) {
    return std::nullopt;
  }
  std::vector<HandleUuid> out;
  for (size_t at = 1; at < pdu.payload.size(); at += 18) {
    HandleUuid e;
    e.handle = get16(pdu.payload, at);
    std::copy(pdu.payload.begin() + at + 2, pdu.payload.begin() + at + 18,
              e.uuid.bytes.rbegin());
    out.push_back(e);
  }
  return out;
}

std::optional<uint16_t> parse_read_request(const Pdu& pdu) {
  if (pdu.opcode != Opcode::kReadRequest || pdu.payload.size() != 2) {
    return std::nullopt;
  }
  return get16(pdu.payload, 0);
}

std::optional<HandleValue> parse_handle_value(const Pdu& pdu) {
  if ((pdu.opcode != Opcode::kWriteRequest &&
       pdu.opcode != Opcode::kHandleValueNotification) ||
      pdu.payload.size() < 2) {
    return std::nullopt;
  }
  return HandleValue{get16(pdu.payload, 0),
                     Bytes(pdu.payload.begin() + 2, pdu.payload.end())};
}

std::string describe(const Pdu& pdu) {
  std::ostringstream out;
  out << opcode_name(pdu.opcode);
  if (auto e = parse_error_response(pdu)) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "0x%02X", static_cast<unsigned>(e->code));
    out << " handle=" << e->handle << " code=" << buf << " ("
        << to_string(e->code) << ")";
  } else if (auto h = parse_read_request(pdu)) {
    out << " handle=" << *h;
  } else if (auto hv = parse_handle_value(pdu)) {
    out << " handle=" << hv->handle << " value=" << to_hex(hv->value);
  } else if (pdu.opcode == Opcode::kReadResponse) {
    out << " value=" << to_hex(pdu.payload);
  }
  return out.str();
}

}  // namespace scosim::att
