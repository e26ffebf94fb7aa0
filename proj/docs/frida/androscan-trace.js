/*
 * Copyright (C) 2026 The Androscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Frida hooks that print one androscan trace record per network call.
//
//   frida -U -f com.example.app -l androscan-trace.js -q 2>/dev/null \
//     | grep '^{' > app.ndjson
//
// Only the common Java entry points are covered; extend as needed.

'use strict';

function emit(api, fields) {
  var rec = { ts: new Date().toISOString(), api: api };
  for (var k in fields) {
    if (fields[k] !== undefined && fields[k] !== null) rec[k] = fields[k];
  }
  console.log(JSON.stringify(rec));
}

function bytesToB64(bytes) {
  var Base64 = Java.use('android.util.Base64');
  return Base64.encodeToString(bytes, 2 /* NO_WRAP */);
}

Java.perform(function () {
  var URL = Java.use('java.net.URL');
  URL.$init.overload('java.lang.String').implementation = function (spec) {
    emit('java.net.URL.<init>', { args: [spec] });
    return this.$init(spec);
  };

  var HUC = Java.use('java.net.HttpURLConnection');
  HUC.connect.implementation = function () {
    var headers = {};
    try {
      var props = this.getRequestProperties();
      var it = props.keySet().iterator();
      while (it.hasNext()) {
        var name = it.next();
        if (name !== null) headers[name] = props.get(name).toString().replace(/^\[|\]$/g, '');
      }
    } catch (e) {
      // already connected: properties are no longer readable
    }
    emit('java.net.HttpURLConnection.connect', {
      url: this.getURL().toString(),
      method: this.getRequestMethod(),
      headers: headers
    });
    return this.connect();
  };

  try {
    var RealCall = Java.use('okhttp3.internal.connection.RealCall');
    var Buffer = Java.use('okio.Buffer');
    RealCall.execute.implementation = function () {
      var req = this.request();
      var headers = [];
      var h = req.headers();
      for (var i = 0; i < h.size(); i++) headers.push([h.name(i), h.value(i)]);
      var body;
      var rb = req.body();
      if (rb !== null) {
        var buf = Buffer.$new();
        rb.writeTo(buf);
        body = bytesToB64(buf.readByteArray());
      }
      emit('okhttp3.Call.execute', {
        url: req.url().toString(),
        method: req.method(),
        headers: headers,
        body_b64: body
      });
      return this.execute();
    };
  } catch (e) {
    // app does not bundle okhttp3
  }

  try {
    var Client = Java.use('org.apache.http.impl.client.AbstractHttpClient');
    var EntityUtils = Java.use('org.apache.http.util.EntityUtils');
    Client.execute.overload('org.apache.http.client.methods.HttpUriRequest').implementation =
      function (req) {
        var headers = [];
        var all = req.getAllHeaders();
        for (var i = 0; i < all.length; i++) headers.push([all[i].getName(), all[i].getValue()]);
        var body;
        try {
          var entity = Java.cast(req, Java.use('org.apache.http.HttpEntityEnclosingRequest')).getEntity();
          if (entity !== null && entity.isRepeatable()) body = EntityUtils.toString(entity);
        } catch (e) {
          // GET and friends carry no entity
        }
        emit('org.apache.http.impl.client.DefaultHttpClient.execute', {
          url: req.getURI().toString(),
          method: req.getMethod(),
          headers: headers,
          body: body
        });
        return this.execute(req);
      };
  } catch (e) {
    // legacy Apache client not present
  }
});
