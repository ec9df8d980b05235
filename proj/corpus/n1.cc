main { p.e->q.x; r.e'->s.y; stop }
