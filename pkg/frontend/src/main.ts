import { App } from "./app";
import { ApiClient } from "./client";
import "./style.css";

const API_BASE = import.meta.env.VITE_API_BASE ?? "http://localhost:8000";

const root = document.getElementById("board")!;
const errorBox = document.getElementById("error")!;
const app = new App(new ApiClient(API_BASE), root, errorBox);

const fileInput = document.getElementById("instance-file") as HTMLInputElement;
fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (file) await app.loadInstance(await file.text());
});
